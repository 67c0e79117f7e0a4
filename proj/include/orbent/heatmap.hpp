#pragma once

/**
 * @file heatmap.hpp
 * @brief SVG heatmap of a mutual information matrix.
 *
 * Colormap: linear ramp in sRGB from #ffffff at 0 to #08306b at max(I), a
 * single-hue lightness ramp. When max(I) is 0 every cell takes the zero
 * color. Output depends only on the matrix and the labels.
 */

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "orbent/error.hpp"
#include "orbent/report.hpp"

namespace orbent {

inline constexpr std::array<int, 3> kHeatmapZeroColor{0xff, 0xff, 0xff};
inline constexpr std::array<int, 3> kHeatmapMaxColor{0x08, 0x30, 0x6b};

/// Hex color for @p value on the ramp over [0, @p max].
inline std::string heatmap_color(double value, double max) {
  double t = max > 0.0 ? value / max : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(kHeatmapZeroColor[static_cast<std::size_t>(c)] +
                                          t * (kHeatmapMaxColor[static_cast<std::size_t>(c)] -
                                               kHeatmapZeroColor[static_cast<std::size_t>(c)])));
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

/**
 * @brief SVG document with one `<rect class="cell">` per matrix element,
 *        row and column labels, and a colorbar annotated with max(I).
 */
inline std::string render_heatmap(const Eigen::MatrixXd& mi, const std::vector<std::string>& labels) {
  const auto n = static_cast<int>(mi.rows());
  if (mi.cols() != n) throw DimensionError("heatmap: matrix must be square");
  if (static_cast<int>(labels.size()) != n) throw DimensionError("heatmap: one label per orbital required");
  double max = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) max = std::max(max, mi(i, j));

  const int cell = 32, margin = 100, bar_width = 18, bar_gap = 30;
  const int grid = n * cell;
  const int width = margin + grid + bar_gap + bar_width + 120;
  const int height = margin + std::max(grid, 3 * cell) + 40;
  const std::string zero_color = heatmap_color(0.0, max);
  auto num = [](double x) { return format_number(x); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<title>Mutual information (nats)</title>\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" fill=\"#ffffff\"/>\n";

  out += "<g class=\"cells\" stroke=\"#d0d0d0\" stroke-width=\"0.5\">\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = i == j ? 0.0 : mi(i, j);
      const std::string fill = i == j ? zero_color : heatmap_color(v, max);
      out += "<rect class=\"cell\" x=\"" + std::to_string(margin + j * cell) + "\" y=\"" +
             std::to_string(margin + i * cell) + "\" width=\"" + std::to_string(cell) + "\" height=\"" +
             std::to_string(cell) + "\" fill=\"" + fill + "\"><title>" +
             detail::xml_escape(labels[static_cast<std::size_t>(i)]) + " / " +
             detail::xml_escape(labels[static_cast<std::size_t>(j)]) + ": " + num(v) + "</title></rect>\n";
    }
  out += "</g>\n";

  out += "<g class=\"labels\">\n";
  for (int k = 0; k < n; ++k) {
    const std::string label = detail::xml_escape(labels[static_cast<std::size_t>(k)]);
    const int centre = margin + k * cell + cell / 2;
    out += "<text class=\"row-label\" x=\"" + std::to_string(margin - 6) + "\" y=\"" + std::to_string(centre + 4) +
           "\" text-anchor=\"end\">" + label + "</text>\n";
    out += "<text class=\"column-label\" x=\"" + std::to_string(centre + 4) + "\" y=\"" +
           std::to_string(margin - 6) + "\" text-anchor=\"start\" transform=\"rotate(-90 " +
           std::to_string(centre + 4) + " " + std::to_string(margin - 6) + ")\">" + label + "</text>\n";
  }
  out += "</g>\n";

  const int bar_x = margin + grid + bar_gap;
  const int bar_height = std::max(grid, 3 * cell);
  out += "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
         "<stop offset=\"0\" stop-color=\"" + heatmap_color(0.0, 1.0) + "\"/>"
         "<stop offset=\"1\" stop-color=\"" + heatmap_color(1.0, 1.0) + "\"/>"
         "</linearGradient></defs>\n";
  out += "<g class=\"colorbar\">\n";
  out += "<rect class=\"colorbar-ramp\" x=\"" + std::to_string(bar_x) + "\" y=\"" + std::to_string(margin) +
         "\" width=\"" + std::to_string(bar_width) + "\" height=\"" + std::to_string(bar_height) + "\" fill=\"" +
         (max > 0.0 ? std::string("url(#ramp)") : zero_color) + "\" stroke=\"#808080\" stroke-width=\"0.5\"/>\n";
  out += "<text class=\"colorbar-max\" x=\"" + std::to_string(bar_x + bar_width + 6) + "\" y=\"" +
         std::to_string(margin + 10) + "\">max = " + num(max) + "</text>\n";
  out += "<text class=\"colorbar-min\" x=\"" + std::to_string(bar_x + bar_width + 6) + "\" y=\"" +
         std::to_string(margin + bar_height) + "\">0</text>\n";
  out += "</g>\n";
  out += "<text class=\"caption\" x=\"" + std::to_string(margin) + "\" y=\"" + std::to_string(height - 12) +
         "\">Mutual information I(i,j) in nats; maximum " + num(max) + "</text>\n";
  out += "</svg>\n";
  return out;
}

inline void export_heatmap(const Eigen::MatrixXd& mi, const std::vector<std::string>& labels,
                           const std::string& path) {
  write_text_file(path, render_heatmap(mi, labels));
}

}  // namespace orbent
