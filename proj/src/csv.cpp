#include "pelve/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pelve::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = field.find_first_not_of(' ');
        fields.push_back(start == std::string::npos ? std::string{} : field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == name) return j;
    throw ParseError("no column named '" + name + "'");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_number(const std::string& field) {
    if (field == "inf" || field == "+inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + field + "'");
    }
    if (used != field.size()) throw ParseError("not a number: '" + field + "'");
    return value;
}

Table read(std::istream& in) {
    Table table;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    table.header = split_line(line);
    if (table.header.empty()) throw ParseError("CSV header is empty");
    table.columns.resize(table.header.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(table.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        for (std::size_t j = 0; j < fields.size(); ++j) {
            try {
                table.columns[j].push_back(parse_number(fields[j]));
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read(in);
}

void write(std::ostream& out, const Table& table) {
    for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
    out << '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t j = 0; j < table.columns.size(); ++j)
            out << (j ? "," : "") << format_number(table.columns[j][r]);
        out << '\n';
    }
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write(out, table);
}

}  // namespace pelve::csv
