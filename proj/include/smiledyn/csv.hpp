#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "smiledyn/error.hpp"

namespace smiledyn {

/// A fully materialized delimited table. Fields are trimmed of surrounding
/// whitespace, so a single optional space after each comma is accepted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows, file order
    std::vector<std::size_t> line_numbers;       // 1-based source line per row

    std::optional<std::size_t> column(const std::string& name) const;

    /// Column index or a schema error naming the missing column.
    std::size_t require_column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);

/// Numeric cell parsers; errors carry the source line and column name.
double parse_double_cell(const std::string& cell, std::size_t line, const std::string& column);

/// Strict integer parse; fractional input is rejected, not rounded.
long parse_int_cell(const std::string& cell, std::size_t line, const std::string& column);

/// Shortest text that round-trips the exact double value.
std::string format_double(double v);

}  // namespace smiledyn
