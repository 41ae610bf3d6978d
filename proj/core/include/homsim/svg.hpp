#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace homsim {

/// Minimal deterministic SVG line plot: axes, ticks, legend, polylines,
/// optional markers with error bars. No external dependencies.
struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_err;  ///< empty for plain lines
  bool markers = false;       ///< draw points instead of a polyline
};

void write_svg_plot(const std::filesystem::path& file,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label,
                    const std::vector<PlotSeries>& series);

}  // namespace homsim
