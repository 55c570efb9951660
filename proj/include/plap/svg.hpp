#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace plap {
namespace svgplot {

struct Series {
  std::vector<double> x, y;
  std::string stroke = "#1f6fb2";
  std::string label;
};

namespace detail {

inline std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace detail

/// Minimal deterministic polyline plot: axes, five ticks per axis, one
/// polyline per series, optional legend.  No external dependencies; the
/// output is a regression artifact, not a UI.
inline std::string line_plot(const std::vector<Series>& series, const std::string& title,
                             const std::string& xlabel, const std::string& ylabel) {
  const double width = 720, height = 480;
  const double ml = 72, mr = 24, mt = 44, mb = 56;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        first = false;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto py = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\">\n";
  out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
         "font-family=\"sans-serif\">" + title + "</text>\n";

  for (int k = 0; k <= 4; ++k) {
    double xv = xmin + (xmax - xmin) * k / 4.0;
    double yv = ymin + (ymax - ymin) * k / 4.0;
    out += "<line x1=\"" + detail::num(px(xv), "%.2f") + "\" y1=\"" +
           detail::num(height - mb, "%.2f") + "\" x2=\"" + detail::num(px(xv), "%.2f") +
           "\" y2=\"" + detail::num(height - mb + 6, "%.2f") +
           "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + detail::num(px(xv), "%.2f") + "\" y=\"" +
           detail::num(height - mb + 20, "%.2f") +
           "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" +
           detail::num(xv) + "</text>\n";
    out += "<line x1=\"" + detail::num(ml - 6, "%.2f") + "\" y1=\"" +
           detail::num(py(yv), "%.2f") + "\" x2=\"" + detail::num(ml, "%.2f") +
           "\" y2=\"" + detail::num(py(yv), "%.2f") + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + detail::num(ml - 10, "%.2f") + "\" y=\"" +
           detail::num(py(yv) + 4, "%.2f") +
           "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" +
           detail::num(yv) + "</text>\n";
  }
  out += "<line x1=\"" + detail::num(ml, "%.2f") + "\" y1=\"" + detail::num(mt, "%.2f") +
         "\" x2=\"" + detail::num(ml, "%.2f") + "\" y2=\"" +
         detail::num(height - mb, "%.2f") + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + detail::num(ml, "%.2f") + "\" y1=\"" +
         detail::num(height - mb, "%.2f") + "\" x2=\"" + detail::num(width - mr, "%.2f") +
         "\" y2=\"" + detail::num(height - mb, "%.2f") + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + detail::num((ml + width - mr) / 2, "%.2f") + "\" y=\"" +
         detail::num(height - 12, "%.2f") +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" +
         xlabel + "</text>\n";
  out += "<text x=\"18\" y=\"" + detail::num((mt + height - mb) / 2, "%.2f") +
         "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 18 " +
         detail::num((mt + height - mb) / 2, "%.2f") + ")\">" + ylabel + "</text>\n";

  int legend_row = 0;
  for (const auto& s : series) {
    if (s.x.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"" + s.stroke + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out += " ";
      out += detail::num(px(s.x[i]), "%.2f") + "," + detail::num(py(s.y[i]), "%.2f");
    }
    out += "\"/>\n";
    if (!s.label.empty()) {
      double ly = mt + 16.0 * legend_row++;
      out += "<line x1=\"" + detail::num(width - mr - 150, "%.2f") + "\" y1=\"" +
             detail::num(ly, "%.2f") + "\" x2=\"" + detail::num(width - mr - 120, "%.2f") +
             "\" y2=\"" + detail::num(ly, "%.2f") + "\" stroke=\"" + s.stroke +
             "\" stroke-width=\"1.5\"/>\n";
      out += "<text x=\"" + detail::num(width - mr - 114, "%.2f") + "\" y=\"" +
             detail::num(ly + 4, "%.2f") +
             "\" font-size=\"11\" font-family=\"sans-serif\">" + s.label + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace svgplot
}  // namespace plap
