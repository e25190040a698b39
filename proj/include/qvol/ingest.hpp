#ifndef QVOL_INGEST_HPP
#define QVOL_INGEST_HPP

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qvol::ingest {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;
    auto operator<=>(const Date&) const = default;
};

/// ISO rendering, YYYY-MM-DD.
std::string to_string(const Date& d);

/// A cleaned market series: strictly increasing dates, finite positive
/// values, nonempty.
struct DatedSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::string source_label;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_dropped_malformed = 0;
    std::size_t rows_dropped_nonpositive = 0;
    std::size_t duplicate_dates_resolved = 0;
};

enum class DateFormat {
    Auto,     ///< detect per file; ambiguous files need an explicit format
    Iso,      ///< YYYY-MM-DD
    DayFirst, ///< DD-MM-YYYY
};

struct ParseOptions {
    std::string date_column = "Date";
    std::string value_column = "Close";
    DateFormat date_format = DateFormat::Auto;
    std::string source_label = "csv";
};

struct ParseResult {
    DatedSeries series;
    IngestReport report;
};

/// Parse a header CSV into a cleaned series: malformed and non-positive
/// rows are dropped and counted, rows are sorted by date, and duplicate
/// dates keep the last occurrence. '-' and '/' both work as date
/// separators. Throws input_error for missing columns, zero valid rows,
/// or an ambiguous date format under DateFormat::Auto.
ParseResult parse_csv(std::istream& in, const ParseOptions& opts = {});

enum class Transform { Levels, LogReturns };

/// Levels passes values through; LogReturns yields ln(v[k+1]/v[k]) and
/// requires positive values (throws input_error naming the date).
std::vector<double> to_signal(const DatedSeries& ds, Transform transform);

/// Serialize with the default schema (Date,Close; ISO dates). parse_csv of
/// the output reproduces the series exactly.
void write_csv(const DatedSeries& ds, std::ostream& out);

} // namespace qvol::ingest

#endif
