#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace seconv {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal static line chart; non-finite points are dropped.
void write_line_chart_svg(std::ostream& out, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<ChartSeries>& series);

}  // namespace seconv
