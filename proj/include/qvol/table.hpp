#ifndef QVOL_TABLE_HPP
#define QVOL_TABLE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qvol::table {

/// Shortest decimal representation with 17 significant digits (round-trips
/// to the same double).
std::string g17(double value);

/// A parsed CSV file: header plus rows of string cells.
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws input_error naming the column.
    std::size_t column_index(std::string_view name) const;
    bool has_column(std::string_view name) const;
};

/// Minimal CSV reader: comma delimiter, optional double-quoted fields with
/// "" escapes, first row is the header. Throws input_error on empty input.
CsvFile read_csv(std::istream& in);

/// Extract one column parsed as doubles; throws input_error naming the
/// column or the first non-numeric row.
std::vector<double> numeric_column(const CsvFile& csv, std::string_view name);

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename).
void atomic_write(const std::filesystem::path& path, std::string_view content);

} // namespace qvol::table

#endif
