#include "smiledyn/csv.hpp"

#include <charconv>
#include <cstdio>
#include <string_view>

namespace smiledyn {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(std::string_view(line).substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
    if (auto idx = column(name)) return *idx;
    throw Error(ErrorKind::Schema, "missing required column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw Error(ErrorKind::Schema,
                        "line " + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorKind::Schema, "empty input: header row required");
    return table;
}

double parse_double_cell(const std::string& cell, std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || cell.empty()) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ", column '" + column +
                                           "': non-numeric value '" + cell + "'");
    }
    return value;
}

long parse_int_cell(const std::string& cell, std::size_t line, const std::string& column) {
    long value = 0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || cell.empty()) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ", column '" + column +
                                           "': expected integer, got '" + cell + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace smiledyn
