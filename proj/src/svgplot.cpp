#include "rfstrack/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rfstrack {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PlotSeries>& series) {
  if (series.empty()) throw std::invalid_argument("render_line_chart: no series");

  constexpr double width = 840.0, height = 520.0;
  constexpr double left = 70.0, right = 180.0, top = 48.0, bottom = 56.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size())
      throw std::invalid_argument("render_line_chart: x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return top + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width, "%.0f") +
         "\" height=\"" + fmt(height, "%.0f") + "\" viewBox=\"0 0 " +
         fmt(width, "%.0f") + " " + fmt(height, "%.0f") + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">" + title + "</text>\n";

  // Axes box and ticks.
  svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(plot_w) +
         "\" height=\"" + fmt(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  constexpr int n_ticks = 5;
  for (int i = 0; i <= n_ticks; ++i) {
    const double fx = xmin + (xmax - xmin) * i / n_ticks;
    const double fy = ymin + (ymax - ymin) * i / n_ticks;
    const double gx = px(fx);
    const double gy = py(fy);
    svg += "<line x1=\"" + fmt(gx) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(gx) +
           "\" y2=\"" + fmt(top + plot_h + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(gx) + "\" y=\"" + fmt(top + plot_h + 20) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt(fx, "%.4g") + "</text>\n";
    svg += "<line x1=\"" + fmt(left - 5) + "\" y1=\"" + fmt(gy) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(gy) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + fmt(left - 9) + "\" y=\"" + fmt(gy + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           fmt(fy, "%.4g") + "</text>\n";
    if (i > 0 && i < n_ticks) {
      svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(gy) + "\" x2=\"" +
             fmt(left + plot_w) + "\" y2=\"" + fmt(gy) +
             "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
    }
  }
  svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 14) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
         x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(top + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + fmt(top + plot_h / 2) + ")\">" + y_label +
         "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\"" +
           (s.dashed ? " stroke-dasharray=\"6 4\"" : "") + " points=\"" + pts +
           "\"/>\n";
    const double ly = top + 16.0 + 18.0 * static_cast<double>(si);
    svg += "<line x1=\"" + fmt(left + plot_w + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(left + plot_w + 40) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"" + (s.dashed ? " stroke-dasharray=\"6 4\"" : "") +
           "/>\n";
    svg += "<text x=\"" + fmt(left + plot_w + 46) + "\" y=\"" + fmt(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace rfstrack
