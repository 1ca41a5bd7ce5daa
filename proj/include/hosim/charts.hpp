#ifndef HOSIM_CHARTS_HPP
#define HOSIM_CHARTS_HPP

#include <string>
#include <utility>
#include <vector>

namespace hosim {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

// Minimal deterministic SVG line chart: axes, ticks, one polyline per
// series, legend.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series);

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series);

}  // namespace hosim

#endif
