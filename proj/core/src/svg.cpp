#include "calibsmooth/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace calibsmooth {

namespace {

// Plot geometry (pixels).
constexpr double kWidth = 560.0;
constexpr double kHeight = 560.0;
constexpr double kPlotX = 70.0;
constexpr double kPlotY = 40.0;
constexpr double kPlotSize = 440.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

double sx(double f) { return kPlotX + f * kPlotSize; }
double sy(double v) { return kPlotY + kPlotSize - v * kPlotSize; }

// Stride so long grids render as a bounded number of segments.
std::size_t stride_for(std::size_t points) {
  return std::max<std::size_t>(1, (points + 511) / 512);
}

} // namespace

std::string render_svg(const DiagramData& diagram, const BootstrapBands* bands,
                       const Report& report) {
  const std::size_t points = diagram.grid.size();
  const std::size_t stride = stride_for(points);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < points; i += stride) idx.push_back(i);
  if (idx.back() != points - 1) idx.push_back(points - 1);

  std::string svg;
  svg.reserve(1 << 16);
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
         fmt(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"#ffffff\"/>\n";

  // Frame and quarter gridlines.
  svg += "<rect x=\"" + fmt(kPlotX) + "\" y=\"" + fmt(kPlotY) + "\" width=\"" +
         fmt(kPlotSize) + "\" height=\"" + fmt(kPlotSize) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int q = 1; q < 4; ++q) {
    const double f = q / 4.0;
    svg += "<line x1=\"" + fmt(sx(f)) + "\" y1=\"" + fmt(sy(0)) + "\" x2=\"" + fmt(sx(f)) +
           "\" y2=\"" + fmt(sy(1)) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt(sx(0)) + "\" y1=\"" + fmt(sy(f)) + "\" x2=\"" + fmt(sx(1)) +
           "\" y2=\"" + fmt(sy(f)) + "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
  }

  // Diagonal reference (perfect calibration).
  svg += "<line x1=\"" + fmt(sx(0)) + "\" y1=\"" + fmt(sy(0)) + "\" x2=\"" + fmt(sx(1)) +
         "\" y2=\"" + fmt(sy(1)) +
         "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";

  // Bootstrap band: one closed path (upper edge forward, lower edge back).
  if (bands && !bands->mu_band.empty()) {
    std::string path = "M";
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const std::size_t i = idx[k];
      path += (k == 0 ? " " : " L ");
      path += fmt(sx(diagram.grid[i])) + " " + fmt(sy(bands->mu_band[i].second));
    }
    for (std::size_t k = idx.size(); k-- > 0;) {
      const std::size_t i = idx[k];
      path += " L " + fmt(sx(diagram.grid[i])) + " " + fmt(sy(bands->mu_band[i].first));
    }
    path += " Z";
    svg += "<path d=\"" + path + "\" fill=\"#f2b8bc\" fill-opacity=\"0.55\" stroke=\"none\"/>\n";
  }

  // Regression curve as a filled ribbon whose width tracks the prediction
  // density (clamped to stay readable).
  double max_density = 0.0;
  for (double d : diagram.delta_hat) max_density = std::max(max_density, d);
  if (max_density <= 0.0) max_density = 1.0;
  std::string ribbon = "M";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const std::size_t i = idx[k];
    const double half = std::clamp(6.0 * diagram.delta_hat[i] / max_density, 0.7, 6.0);
    ribbon += (k == 0 ? " " : " L ");
    ribbon += fmt(sx(diagram.grid[i])) + " " + fmt(sy(diagram.mu_hat[i]) - half);
  }
  for (std::size_t k = idx.size(); k-- > 0;) {
    const std::size_t i = idx[k];
    const double half = std::clamp(6.0 * diagram.delta_hat[i] / max_density, 0.7, 6.0);
    ribbon += " L " + fmt(sx(diagram.grid[i])) + " " + fmt(sy(diagram.mu_hat[i]) + half);
  }
  ribbon += " Z";
  svg += "<path d=\"" + ribbon + "\" fill=\"#d62728\" stroke=\"none\"/>\n";

  // Axis labels.
  const char* labels[3] = {"0", "0.5", "1"};
  const double ticks[3] = {0.0, 0.5, 1.0};
  for (int i = 0; i < 3; ++i) {
    svg += "<text x=\"" + fmt(sx(ticks[i])) + "\" y=\"" + fmt(sy(0) + 18.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           labels[i] + "</text>\n";
    svg += "<text x=\"" + fmt(kPlotX - 8.0) + "\" y=\"" + fmt(sy(ticks[i]) + 4.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" +
           labels[i] + "</text>\n";
  }
  svg += "<text x=\"" + fmt(sx(0.5)) + "\" y=\"" + fmt(sy(0) + 38.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">prediction</text>\n";
  svg += "<text x=\"" + fmt(kPlotX - 44.0) + "\" y=\"" + fmt(sy(0.5)) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 " +
         fmt(kPlotX - 44.0) + " " + fmt(sy(0.5)) + ")\">outcome</text>\n";

  // Annotation mirrors the report values.
  svg += "<text x=\"" + fmt(kPlotX + 10.0) + "\" y=\"" + fmt(kPlotY + 20.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\">smECE* = " + fmt(report.smece_star) +
         "</text>\n";
  svg += "<text x=\"" + fmt(kPlotX + 10.0) + "\" y=\"" + fmt(kPlotY + 38.0) +
         "\" font-family=\"sans-serif\" font-size=\"14\">sigma* = " + fmt(report.sigma_star) +
         "</text>\n";
  svg += "</svg>\n";
  return svg;
}

} // namespace calibsmooth
