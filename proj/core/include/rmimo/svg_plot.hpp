#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rmimo {

// Minimal self-contained SVG line plots; no external plotting dependency.

struct PlotSeries {
  std::string label;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;      // draw point markers (simulation series)
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // error bars when non-empty (aligned with y)
};

struct PlotHLine {
  double y = 0.0;
  std::string label;
  std::string color = "#555555";
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  std::vector<PlotHLine> hlines;
  bool log_x = false;
};

std::string render_svg(const PlotSpec& spec);
void write_svg(const std::filesystem::path& path, const PlotSpec& spec);

}  // namespace rmimo
