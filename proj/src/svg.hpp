#pragma once

#include "raa/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace raa::svg {

struct Series {
  std::string label;
  std::string color;
  std::vector<std::pair<Real, Real>> points;
};

struct VerticalMarker {
  std::string label;
  std::string color;
  Real x = 0.0;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  Real x_min = 0.0, x_max = 1.0;
  Real y_min = 0.0, y_max = 1.0;
  std::vector<Series> series;
  std::vector<VerticalMarker> markers;
};

/// Self-contained SVG line chart (no external references, deterministic
/// output for identical input).
std::string render_line_chart(const ChartSpec& spec);

}  // namespace raa::svg
