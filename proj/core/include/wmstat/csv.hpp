#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wmstat {

// Header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws std::invalid_argument if the row width differs from the header.
  void add_row(std::vector<std::string> row);
};

// Shortest representation that parses back to the same double.
std::string format_number(double x);
std::string format_number(std::int64_t x);
inline std::string format_number(int x) { return format_number(static_cast<std::int64_t>(x)); }
inline std::string format_number(std::size_t x) {
  return format_number(static_cast<std::int64_t>(x));
}
double parse_number(std::string_view s);

// Comma separated, LF line endings. Cells containing a comma, quote or
// newline are quoted.
void write_csv(std::ostream& out, const CsvTable& table);
std::string to_csv_string(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

}  // namespace wmstat
