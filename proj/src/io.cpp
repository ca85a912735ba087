#include "hembem/io.hpp"

#include "hembem/error.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hembem {

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size())
{
    for (std::size_t i = 0; i < header.size(); ++i)
        out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != columns_)
        throw DomainError("csv row has " + std::to_string(values.size()) + " values, header has " +
                          std::to_string(columns_));
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

std::size_t CsvTable::rows() const { return columns.empty() ? 0 : columns.begin()->second.size(); }

const std::vector<double>& CsvTable::column(const std::string& name) const
{
    auto it = columns.find(name);
    if (it == columns.end())
        throw ConfigError("csv: missing column '" + name + "'");
    return it->second;
}

namespace {
std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}
} // namespace

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("csv: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    t.header = split(line);
    for (const auto& h : t.header)
        t.columns[h];
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw ConfigError("csv: line " + std::to_string(lineno) + " has the wrong number of fields");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v = std::nan("");
            if (cells[i] != "nan" && !cells[i].empty()) {
                try {
                    v = std::stod(cells[i]);
                } catch (const std::exception&) {
                    throw ConfigError("csv: line " + std::to_string(lineno) + ": bad number '" + cells[i] + "'");
                }
            }
            t.columns[t.header[i]].push_back(v);
        }
    }
    return t;
}

CsvTable read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open " + path);
    return read_csv(in);
}

void ensure_directory(const std::string& path)
{
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec)
        throw Error("cannot create directory " + path + ": " + ec.message());
}

} // namespace hembem
