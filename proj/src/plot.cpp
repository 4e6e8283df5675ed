#include "quantq/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace quantq {

namespace {

constexpr double kWidth = 900, kHeight = 420;
constexpr double kLeft = 80, kRight = 190, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_line_plot_svg(std::ostream& os, const PlotLabels& labels, const std::vector<double>& x,
                         const std::vector<PlotSeries>& series) {
  if (x.empty()) throw std::invalid_argument("write_line_plot_svg: no x values");
  double x0 = *std::min_element(x.begin(), x.end());
  double x1 = *std::max_element(x.begin(), x.end());
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& s : series) {
    if (s.y.size() != x.size()) throw std::invalid_argument("write_line_plot_svg: series length mismatch");
    for (double v : s.y)
      if (std::isfinite(v)) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(labels.title) << "</text>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
    os << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << fmt(kTop + ph + 18) << "\" text-anchor=\"middle\">" << tick(xv)
       << "</text>\n";
    os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">" << tick(yv)
       << "</text>\n";
    os << "<line x1=\"" << fmt(kLeft) << "\" x2=\"" << fmt(kLeft + pw) << "\" y1=\"" << fmt(py(yv)) << "\" y2=\""
       << fmt(py(yv)) << "\" stroke=\"#e0e0e0\"/>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 15) << "\" text-anchor=\"middle\">"
     << escape(labels.x) << "</text>\n";
  os << "<text transform=\"translate(20," << fmt(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(labels.y) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = s.dashed ? "black" : kPalette[k % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << (s.dashed ? "2" : "1.2") << "\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << (first ? "" : " ") << fmt(px(x[i])) << ',' << fmt(py(s.y[i]));
      first = false;
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << fmt(kWidth - kRight + 15) << "\" x2=\"" << fmt(kWidth - kRight + 45) << "\" y1=\""
       << fmt(ly) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\""
       << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    os << "<text x=\"" << fmt(kWidth - kRight + 52) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace quantq
