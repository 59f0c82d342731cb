#include "fdal/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "fdal/errors.hpp"

namespace fdal {

namespace {

double transform(double v, bool log_scale) {
  if (!log_scale) return v;
  return std::log10(std::max(v, 1e-300));
}

}  // namespace

void emit_svg_scatter(const std::vector<SvgSeries> &series, const std::string &path,
                      const SvgOptions &opts) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int w = opts.width, h = opts.height;
  const double ml = 64, mr = 18, mt = opts.title.empty() ? 18 : 34, mb = 46;

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool any = false;
  for (const auto &s : series)
    for (const auto &[px, py] : s.points) {
      const double tx = transform(px, opts.log_x), ty = transform(py, opts.log_y);
      if (!any) {
        xmin = xmax = tx;
        ymin = ymax = ty;
        any = true;
      } else {
        xmin = std::min(xmin, tx);
        xmax = std::max(xmax, tx);
        ymin = std::min(ymin, ty);
        ymax = std::max(ymax, ty);
      }
    }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;

  auto sx = [&](double v) { return ml + (transform(v, opts.log_x) - xmin) / (xmax - xmin) * (w - ml - mr); };
  auto sy = [&](double v) { return h - mb - (transform(v, opts.log_y) - ymin) / (ymax - ymin) * (h - mt - mb); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << opts.title << "</text>\n";
  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
  // ticks (5 per axis)
  out.precision(6);
  for (int t = 0; t <= 5; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 5.0;
    const double fy = ymin + (ymax - ymin) * t / 5.0;
    const double px = ml + (w - ml - mr) * t / 5.0;
    const double py = h - mb - (h - mt - mb) * t / 5.0;
    const double vx = opts.log_x ? std::pow(10.0, fx) : fx;
    const double vy = opts.log_y ? std::pow(10.0, fy) : fy;
    out << "<line x1=\"" << px << "\" y1=\"" << h - mb << "\" x2=\"" << px << "\" y2=\""
        << h - mb + 4 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px << "\" y=\"" << h - mb + 16
        << "\" text-anchor=\"middle\" font-size=\"10\">" << vx << "</text>\n";
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << py << "\" x2=\"" << ml << "\" y2=\"" << py
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py + 3
        << "\" text-anchor=\"end\" font-size=\"10\">" << vy << "</text>\n";
  }
  if (!opts.x_label.empty())
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">" << opts.x_label << "</text>\n";
  if (!opts.y_label.empty())
    out << "<text x=\"14\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
        << (mt + h - mb) / 2 << ")\">" << opts.y_label << "</text>\n";

  int legend_y = (int)mt + 6;
  for (const auto &s : series) {
    if (s.connect && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto &[px, py] : s.points) out << sx(px) << "," << sy(py) << " ";
      out << "\"/>\n";
    }
    for (const auto &[px, py] : s.points)
      out << "<circle cx=\"" << sx(px) << "\" cy=\"" << sy(py) << "\" r=\"2.4\" fill=\""
          << s.color << "\"/>\n";
    if (!s.label.empty()) {
      out << "<circle cx=\"" << w - mr - 120 << "\" cy=\"" << legend_y << "\" r=\"3\" fill=\""
          << s.color << "\"/>\n";
      out << "<text x=\"" << w - mr - 112 << "\" y=\"" << legend_y + 4
          << "\" font-size=\"11\">" << s.label << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
}

}  // namespace fdal
