#include "qvol/table.hpp"

#include "qvol/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

namespace qvol::table {

std::string g17(double value) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::size_t CsvFile::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw input_error("missing column '" + std::string(name) + "'");
}

bool CsvFile::has_column(std::string_view name) const {
    for (const auto& h : header) {
        if (h == name) return true;
    }
    return false;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

CsvFile read_csv(std::istream& in) {
    CsvFile csv;
    std::string line;
    if (!std::getline(in, line)) {
        throw input_error("empty input: no header row");
    }
    csv.header = split_csv_line(strip_cr(std::move(line)));
    while (std::getline(in, line)) {
        line = strip_cr(std::move(line));
        if (line.empty()) continue;
        csv.rows.push_back(split_csv_line(line));
    }
    return csv;
}

std::vector<double> numeric_column(const CsvFile& csv, std::string_view name) {
    const std::size_t idx = csv.column_index(name);
    std::vector<double> values;
    values.reserve(csv.rows.size());
    for (std::size_t row = 0; row < csv.rows.size(); ++row) {
        if (idx >= csv.rows[row].size()) {
            throw input_error("row " + std::to_string(row + 1) + " has no field for column '" +
                              std::string(name) + "'");
        }
        const std::string& cell = csv.rows[row][idx];
        double value = 0.0;
        const auto* first = cell.data();
        const auto* last = cell.data() + cell.size();
        const auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc() || res.ptr != last) {
            throw input_error("non-numeric value '" + cell + "' in column '" +
                              std::string(name) + "' at row " + std::to_string(row + 1));
        }
        values.push_back(value);
    }
    return values;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw input_error("cannot open '" + tmp + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw input_error("write failed for '" + tmp + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace qvol::table
