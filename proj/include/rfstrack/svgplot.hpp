#pragma once

#include <string>
#include <vector>

namespace rfstrack {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Minimal deterministic SVG line chart (fixed palette, legend, linear axes).
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series);

}  // namespace rfstrack
