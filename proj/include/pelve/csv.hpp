#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace pelve::csv {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numeric table with a header row: one column per header name.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    // Index of the named column; throws ParseError when absent.
    std::size_t column_index(const std::string& name) const;
    const std::vector<double>& column(const std::string& name) const {
        return columns[column_index(name)];
    }
};

// Reads a comma separated numeric table. "inf"/"-inf"/"nan" are accepted.
Table read(std::istream& in);
Table read_file(const std::string& path);

void write(std::ostream& out, const Table& table);
void write_file(const std::string& path, const Table& table);

// 17 significant digits; "inf" for +inf.
std::string format_number(double x);
double parse_number(const std::string& field);

}  // namespace pelve::csv
