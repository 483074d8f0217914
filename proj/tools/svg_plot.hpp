#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wmstat/csv.hpp"

namespace wmstat::tools {

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;
  std::string title;
  bool log_y = false;
};

// One polyline per y column against x, rows in file order. Cells that are
// empty or not finite (or non-positive with log_y) break the line.
void write_svg_plot(std::ostream& out, const CsvTable& table, const PlotSpec& spec);

}  // namespace wmstat::tools
