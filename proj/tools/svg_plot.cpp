#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace wmstat::tools {
namespace {

constexpr double kWidth = 640, kHeight = 420, kMargin = 56;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::size_t column(const CsvTable& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw std::invalid_argument("plot: no column '" + name + "'");
  return static_cast<std::size_t>(it - t.header.begin());
}

std::optional<double> cell_value(const std::string& s, bool log_scale) {
  if (s.empty()) return {};
  double v = 0.0;
  try {
    v = parse_number(s);
  } catch (const std::invalid_argument&) {
    return {};
  }
  if (!std::isfinite(v)) return {};
  if (log_scale) {
    if (v <= 0.0) return {};
    return std::log10(v);
  }
  return v;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg_plot(std::ostream& out, const CsvTable& table, const PlotSpec& spec) {
  const std::size_t xc = column(table, spec.x);
  std::vector<std::size_t> ycs;
  for (const auto& y : spec.y) ycs.push_back(column(table, y));

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& row : table.rows) {
    const auto x = cell_value(row[xc], false);
    if (!x) continue;
    for (std::size_t yc : ycs) {
      const auto y = cell_value(row[yc], spec.log_y);
      if (!y) continue;
      x0 = std::min(x0, *x), x1 = std::max(x1, *x);
      y0 = std::min(y0, *y), y1 = std::max(y1, *y);
    }
  }
  if (!(x0 <= x1)) throw std::invalid_argument("plot: no finite points");
  if (x0 == x1) x0 -= 0.5, x1 += 0.5;
  if (y0 == y1) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); };
  auto py = [&](double y) { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape(spec.title)
      << "</text>\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
  const std::string ypre = spec.log_y ? "1e" : "";
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">" << format_number(x0)
      << "</text>\n";
  out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
      << "\" text-anchor=\"end\">" << format_number(x1) << "</text>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(spec.x) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">"
      << ypre << format_number(y0) << "</text>\n";
  out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 8 << "\" text-anchor=\"end\">" << ypre
      << format_number(y1) << "</text>\n";

  for (std::size_t s = 0; s < ycs.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string points;
    auto flush = [&] {
      if (!points.empty()) {
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
            << points << "\"/>\n";
      }
      points.clear();
    };
    for (const auto& row : table.rows) {
      const auto x = cell_value(row[xc], false);
      const auto y = cell_value(row[ycs[s]], spec.log_y);
      if (!x || !y) {
        flush();
        continue;
      }
      points += format_number(px(*x)) + "," + format_number(py(*y)) + " ";
    }
    flush();
    out << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 14 * (s + 1)
        << "\" fill=\"" << color << "\">" << escape(spec.y[s]) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace wmstat::tools
