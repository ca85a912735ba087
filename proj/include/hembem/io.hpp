#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hembem {

/// Comma separated output with full double precision; NaN is written as "nan".
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
    std::size_t columns_;
};

std::string format_number(double v);

/// Columns of a CSV file with a header line, keyed by column name.
struct CsvTable {
    std::vector<std::string> header;
    std::map<std::string, std::vector<double>> columns;
    std::size_t rows() const;
    /// Throws ConfigError naming the column if absent.
    const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Creates the directory (and parents); throws Error on failure.
void ensure_directory(const std::string& path);

} // namespace hembem
