#include "qvol/ingest.hpp"

#include "qvol/errors.hpp"
#include "qvol/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>

namespace qvol::ingest {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return kDays[m - 1];
}

bool valid_date(const Date& d) {
    return d.year >= 1 && d.year <= 9999 && d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.year, d.month);
}

// Splits "a-b-c" or "a/b/c" into three integer fields.
std::optional<std::array<int, 3>> split_date_fields(const std::string& text) {
    std::array<int, 3> fields{};
    std::size_t part = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '-' || text[i] == '/') {
            if (part >= 3 || i == start) return std::nullopt;
            int value = 0;
            const auto res = std::from_chars(text.data() + start, text.data() + i, value);
            if (res.ec != std::errc() || res.ptr != text.data() + i) return std::nullopt;
            fields[part++] = value;
            start = i + 1;
        }
    }
    if (part != 3) return std::nullopt;
    return fields;
}

// A date string is ISO-shaped when the year leads (first field > 31 is the
// practical test; real years always are), day-first-shaped when it trails.
enum class Shape { IsoLike, TrailingYear, Bad };

Shape classify(const std::array<int, 3>& f) {
    if (f[0] > 31) return Shape::IsoLike;
    if (f[2] > 31) return Shape::TrailingYear;
    return Shape::Bad;
}

std::optional<Date> parse_date(const std::string& text, DateFormat format) {
    const auto fields = split_date_fields(text);
    if (!fields) return std::nullopt;
    Date d;
    if (format == DateFormat::Iso) {
        d = {(*fields)[0], (*fields)[1], (*fields)[2]};
    } else {
        d = {(*fields)[2], (*fields)[1], (*fields)[0]};
    }
    if (!valid_date(d)) return std::nullopt;
    return d;
}

std::optional<double> parse_value(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

DateFormat detect_format(const std::vector<std::string>& date_cells) {
    std::size_t iso_like = 0;
    std::size_t trailing = 0;
    bool day_field_over_12 = false;
    for (const auto& cell : date_cells) {
        const auto fields = split_date_fields(cell);
        if (!fields) continue;
        switch (classify(*fields)) {
            case Shape::IsoLike:
                ++iso_like;
                break;
            case Shape::TrailingYear:
                ++trailing;
                if ((*fields)[0] > 12) day_field_over_12 = true;
                break;
            case Shape::Bad:
                break;
        }
    }
    if (iso_like == 0 && trailing == 0) {
        throw input_error("no recognizable dates; expected YYYY-MM-DD or DD-MM-YYYY");
    }
    if (iso_like >= trailing) return DateFormat::Iso;
    if (!day_field_over_12) {
        throw input_error(
            "ambiguous date format: every field fits both DD-MM-YYYY and MM-DD-YYYY; "
            "pass an explicit date format (day-first is the supported trailing-year "
            "layout)");
    }
    return DateFormat::DayFirst;
}

} // namespace

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

ParseResult parse_csv(std::istream& in, const ParseOptions& opts) {
    const table::CsvFile csv = table::read_csv(in);
    const std::size_t date_idx = csv.column_index(opts.date_column);
    const std::size_t value_idx = csv.column_index(opts.value_column);

    ParseResult out;
    out.report.rows_read = csv.rows.size();
    out.series.source_label = opts.source_label;

    DateFormat format = opts.date_format;
    if (format == DateFormat::Auto) {
        std::vector<std::string> date_cells;
        date_cells.reserve(csv.rows.size());
        for (const auto& row : csv.rows) {
            if (date_idx < row.size()) date_cells.push_back(row[date_idx]);
        }
        format = detect_format(date_cells);
    }

    struct Row {
        Date date;
        double value;
        std::size_t input_order;
    };
    std::vector<Row> rows;
    rows.reserve(csv.rows.size());

    for (std::size_t idx = 0; idx < csv.rows.size(); ++idx) {
        const auto& cells = csv.rows[idx];
        if (date_idx >= cells.size() || value_idx >= cells.size()) {
            ++out.report.rows_dropped_malformed;
            continue;
        }
        const auto date = parse_date(cells[date_idx], format);
        const auto value = parse_value(cells[value_idx]);
        if (!date || !value) {
            ++out.report.rows_dropped_malformed;
            continue;
        }
        if (!(*value > 0.0)) {
            ++out.report.rows_dropped_nonpositive;
            continue;
        }
        rows.push_back({*date, *value, idx});
    }

    if (rows.empty()) {
        throw input_error("zero valid rows in '" + opts.source_label + "'");
    }

    // Stable sort by date keeps input order within ties; the last
    // occurrence of each date wins.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.date < b.date; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i + 1 < rows.size() && rows[i + 1].date == rows[i].date) {
            ++out.report.duplicate_dates_resolved;
            continue;
        }
        out.series.dates.push_back(rows[i].date);
        out.series.values.push_back(rows[i].value);
    }
    out.report.rows_kept = out.series.dates.size();
    return out;
}

std::vector<double> to_signal(const DatedSeries& ds, Transform transform) {
    if (transform == Transform::Levels) {
        return ds.values;
    }
    if (ds.values.size() < 2) {
        throw domain_error("log returns need at least 2 values, got " +
                           std::to_string(ds.values.size()));
    }
    for (std::size_t i = 0; i < ds.values.size(); ++i) {
        if (!(ds.values[i] > 0.0)) {
            throw input_error("non-positive value on " + to_string(ds.dates[i]) +
                              " prevents log returns");
        }
    }
    std::vector<double> returns;
    returns.reserve(ds.values.size() - 1);
    for (std::size_t i = 0; i + 1 < ds.values.size(); ++i) {
        returns.push_back(std::log(ds.values[i + 1] / ds.values[i]));
    }
    return returns;
}

void write_csv(const DatedSeries& ds, std::ostream& out) {
    out << "Date,Close\n";
    for (std::size_t i = 0; i < ds.dates.size(); ++i) {
        out << to_string(ds.dates[i]) << ',' << table::g17(ds.values[i]) << '\n';
    }
}

} // namespace qvol::ingest
