#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace raa::svg {

namespace {

constexpr int kWidth = 840;
constexpr int kHeight = 520;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 55;

std::string num(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec) {
  const Real plot_w = kWidth - kMarginLeft - kMarginRight;
  const Real plot_h = kHeight - kMarginTop - kMarginBottom;
  const Real x_span = spec.x_max > spec.x_min ? spec.x_max - spec.x_min : 1.0;
  const Real y_span = spec.y_max > spec.y_min ? spec.y_max - spec.y_min : 1.0;
  auto px = [&](Real x) { return kMarginLeft + (x - spec.x_min) / x_span * plot_w; };
  auto py = [&](Real y) { return kMarginTop + (spec.y_max - y) / y_span * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape(spec.title) << "</text>\n";

  // Grid lines and tick labels.
  const int x_ticks = 9, y_ticks = 6;
  for (int i = 0; i < x_ticks; ++i) {
    const Real x = spec.x_min + x_span * i / (x_ticks - 1);
    const Real gx = px(x);
    out << "<line x1=\"" << num(gx) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(gx)
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << num(gx) << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(x)
        << "</text>\n";
  }
  for (int i = 0; i < y_ticks; ++i) {
    const Real y = spec.y_min + y_span * i / (y_ticks - 1);
    const Real gy = py(y);
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << num(gy) << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << num(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(gy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(y)
        << "</text>\n";
  }
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << num(plot_w)
      << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#333333\"/>\n";

  // Axis labels.
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(spec.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << kMarginTop + plot_h / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  // Vertical markers (e.g. desired/interference directions).
  for (const VerticalMarker& m : spec.markers) {
    if (m.x < spec.x_min || m.x > spec.x_max) continue;
    const Real gx = px(m.x);
    out << "<line x1=\"" << num(gx) << "\" y1=\"" << kMarginTop << "\" x2=\"" << num(gx)
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"" << m.color
        << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
    out << "<text x=\"" << num(gx + 3) << "\" y=\"" << kMarginTop + 12
        << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"" << m.color << "\">"
        << escape(m.label) << "</text>\n";
  }

  // Data series, clamped to the plot box.
  for (const Series& s : spec.series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\" points=\"";
    for (const auto& [x, y] : s.points) {
      const Real cy = std::clamp(y, spec.y_min, spec.y_max);
      out << num(px(x)) << "," << num(py(cy)) << " ";
    }
    out << "\"/>\n";
  }

  // Legend.
  Real ly = kMarginTop + 14;
  for (const Series& s : spec.series) {
    const Real lx = kMarginLeft + plot_w - 150;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 24)
        << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace raa::svg
