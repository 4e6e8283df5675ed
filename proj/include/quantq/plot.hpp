#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quantq {

struct PlotSeries {
  std::string label;
  std::vector<double> y;
  bool dashed = false;
};

struct PlotLabels {
  std::string title;
  std::string x;
  std::string y;
};

/// Minimal standalone SVG line chart. Output depends only on the inputs.
void write_line_plot_svg(std::ostream& os, const PlotLabels& labels, const std::vector<double>& x,
                         const std::vector<PlotSeries>& series);

}  // namespace quantq
