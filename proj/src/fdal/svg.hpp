#ifndef FDAL_SVG_HPP
#define FDAL_SVG_HPP

#include <string>
#include <vector>

namespace fdal {

struct SvgOptions {
  int width = 640;
  int height = 420;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label, y_label;
};

struct SvgSeries {
  std::vector<std::pair<double, double>> points;
  std::string color = "#2a7f2a";
  bool connect = false;  // draw a polyline through the points
  std::string label;
};

/// Scatter/line plot with axes and tick labels; an empty point set still
/// produces a valid SVG with axes.
void emit_svg_scatter(const std::vector<SvgSeries> &series, const std::string &path,
                      const SvgOptions &opts = {});

}  // namespace fdal

#endif
