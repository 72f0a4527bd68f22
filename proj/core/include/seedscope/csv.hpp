#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace seedscope {

using CsvRow = std::vector<std::string>;

/// RFC 4180 parsing: quoted fields may contain commas, quotes ("") and newlines.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

void write_csv_row(std::ostream& out, const CsvRow& row);

/// Shortest round-trip decimal form of a double.
std::string format_real(double value);

}  // namespace seedscope
