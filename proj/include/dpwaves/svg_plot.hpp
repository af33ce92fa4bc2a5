#pragma once

#include <string>
#include <vector>

namespace dpwaves {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool markers = false;
  bool dashed = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  int width = 640;
  int height = 420;
};

/// A standalone SVG line chart.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace dpwaves
