#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace sea {

// Minimal deterministic SVG line plots; presentation only, the CSV output
// is the source of truth.

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

namespace detail {

inline std::string svg_num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

inline const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
      "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};
  return colors;
}

}  // namespace detail

inline std::string render_line_plot(const std::vector<PlotSeries>& series,
                                    const std::string& title,
                                    const std::string& x_label,
                                    const std::string& y_label,
                                    int width = 760, int height = 520) {
  const double margin_left = 64, margin_right = 160, margin_top = 40,
               margin_bottom = 48;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool first = true;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (first) {
        x_lo = x_hi = s.x[i];
        y_lo = y_hi = s.y[i];
        first = false;
      }
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;
  const double plot_w = width - margin_left - margin_right;
  const double plot_h = height - margin_top - margin_bottom;
  auto px = [&](double x) {
    return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w;
  };
  auto py = [&](double y) {
    return margin_top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;
  };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title
      << "</text>\n";
  out << "<line x1=\"" << detail::svg_num(margin_left) << "\" y1=\""
      << detail::svg_num(margin_top) << "\" x2=\""
      << detail::svg_num(margin_left) << "\" y2=\""
      << detail::svg_num(margin_top + plot_h)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << detail::svg_num(margin_left) << "\" y1=\""
      << detail::svg_num(margin_top + plot_h) << "\" x2=\""
      << detail::svg_num(margin_left + plot_w) << "\" y2=\""
      << detail::svg_num(margin_top + plot_h)
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double xv = x_lo + (x_hi - x_lo) * tick / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * tick / 4.0;
    out << "<text x=\"" << detail::svg_num(px(xv)) << "\" y=\""
        << detail::svg_num(margin_top + plot_h + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << detail::svg_num(xv) << "</text>\n";
    out << "<text x=\"" << detail::svg_num(margin_left - 8) << "\" y=\""
        << detail::svg_num(py(yv) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << detail::svg_num(yv) << "</text>\n";
  }
  out << "<text x=\"" << detail::svg_num(margin_left + plot_w / 2)
      << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << detail::svg_num(margin_top + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << detail::svg_num(margin_top + plot_h / 2) << ")\">" << y_label
      << "</text>\n";
  for (size_t si = 0; si < series.size(); ++si) {
    const auto& color =
        detail::svg_palette()[si % detail::svg_palette().size()];
    std::ostringstream points;
    for (size_t i = 0; i < series[si].x.size(); ++i) {
      if (!std::isfinite(series[si].x[i]) || !std::isfinite(series[si].y[i]))
        continue;
      if (points.tellp() > 0) points << " ";
      points << detail::svg_num(px(series[si].x[i])) << ","
             << detail::svg_num(py(series[si].y[i]));
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << points.str() << "\"/>\n";
    const double ly = margin_top + 14 + 16.0 * si;
    out << "<line x1=\"" << detail::svg_num(margin_left + plot_w + 12)
        << "\" y1=\"" << detail::svg_num(ly - 4) << "\" x2=\""
        << detail::svg_num(margin_left + plot_w + 34) << "\" y2=\""
        << detail::svg_num(ly - 4) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << detail::svg_num(margin_left + plot_w + 40)
        << "\" y=\"" << detail::svg_num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << series[si].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sea
