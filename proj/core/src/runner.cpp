#include "calibsmooth/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "calibsmooth/errors.hpp"
#include "calibsmooth/metrics.hpp"

namespace calibsmooth {

namespace {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write output file: " + path);
  out << content;
}

std::string format_compact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Diagram for the logit metric: smooth in h-space at the transformed-scale
// fixed point, map the axis back through h^-1 for display.
DiagramData logit_diagram(const Dataset& dataset, const TransformSpec& transform,
                          const SmeceResult& fixed_point, double eps) {
  const detail::HCurves curves =
      detail::h_curves(dataset, transform, fixed_point.sigma_star, eps, kMaxDiagramCells);

  DiagramData data;
  const std::size_t points = curves.grid_h.size();
  data.grid.resize(points);
  for (std::size_t i = 0; i < points; ++i) data.grid[i] = transform.inverse(curves.grid_h[i]);
  data.mu_hat = curves.mu;
  data.delta_hat = curves.density;
  data.sigma_used = fixed_point.sigma_star;
  data.smece_star = fixed_point.value;

  // Deviation from the diagonal in prediction units, integrated against the
  // h-space density.
  const double step = curves.grid_h[1] - curves.grid_h[0];
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < points; ++i) {
    const double f0 = std::fabs(curves.mu[i] - data.grid[i]) * curves.density[i];
    const double f1 = std::fabs(curves.mu[i + 1] - data.grid[i + 1]) * curves.density[i + 1];
    integral += 0.5 * (f0 + f1) * step;
  }
  data.tilde_smece = integral;
  return data;
}

} // namespace

void RunConfig::validate() const {
  if (input_path.empty()) throw config_error("no input file given");
  if (!(eps > 0.0 && eps <= 0.1)) throw config_error("eps must be in (0, 0.1]");
  if (bootstrap_resamples != 0 && bootstrap_resamples < 2) {
    throw config_error("bootstrap resamples must be 0 (disabled) or >= 2");
  }
  if (bins_override && *bins_override < 1) throw config_error("bins must be >= 1");
  if (out_report_json.empty() && out_report_csv.empty() && out_svg.empty() &&
      out_curves.empty()) {
    throw config_error("at least one output must be requested");
  }
}

RunOutput run(const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const Dataset dataset = load_dataset(config.input_path, config.input_format);
  const std::size_t n = dataset.size();

  RunOutput output;
  std::vector<std::string>& warnings = output.report.warnings;

  if (config.transform == TransformKind::identity) {
    output.diagram = build_diagram(dataset, config.eps);
    if (config.bootstrap_resamples > 0) {
      output.bands = bootstrap(dataset, config.bootstrap_resamples, config.seed, config.eps);
    }
  } else {
    const TransformSpec transform = TransformSpec::logit();
    std::size_t clamped = 0;
    for (const Sample& s : dataset) {
      if (s.f < transform.clamp() || s.f > 1.0 - transform.clamp()) ++clamped;
    }
    if (clamped > 0) {
      warnings.push_back(std::to_string(clamped) + " prediction(s) clamped to [" +
                         format_compact(transform.clamp()) + ", " +
                         format_compact(1.0 - transform.clamp()) + "] before the logit map");
    }
    const SmeceResult fixed_point = smece_h_fixed_point(dataset, transform, config.eps);
    output.diagram = logit_diagram(dataset, transform, fixed_point, config.eps);
    if (config.bootstrap_resamples > 0) {
      const double sigma_point = fixed_point.sigma_star;
      const double eps = config.eps;
      output.bands = detail::bootstrap_with(
          dataset, config.bootstrap_resamples, config.seed,
          [&transform, eps](const Dataset& d) {
            return smece_h_fixed_point(d, transform, eps).value;
          },
          [&transform, sigma_point, eps](const Dataset& d) {
            return detail::h_curves(d, transform, sigma_point, eps, kMaxDiagramCells).mu;
          });
    }
  }

  Report& report = output.report;
  report.n = n;
  report.smece_star = output.diagram.smece_star;
  report.sigma_star = output.diagram.sigma_used;
  report.tilde_smece = output.diagram.tilde_smece;

  int bins = 0;
  if (config.bins_override) {
    bins = *config.bins_override;
  } else {
    const std::vector<int> candidates = {5, 10, 15, 20, 25, 30};
    if (n >= 10) {
      bins = select_bins_cv(dataset, candidates, 5, config.seed);
    } else {
      bins = 1;
      warnings.push_back("dataset too small for bin cross-validation; using 1 bin");
    }
  }
  report.bins_used = bins;
  report.binned_ece = binned_ece(dataset, bins);

  if (output.bands) report.smece_ci = output.bands->smece_ci;

  // Sample-size guidance: estimating at scale sigma* to precision 0.01
  // wants on the order of 1/(sigma* * 0.01^2) samples.
  const double recommended = 1.0 / (std::max(report.sigma_star, 1e-12) * 1e-4);
  if (static_cast<double>(n) < recommended) {
    warnings.push_back("n=" + std::to_string(n) + " is below the ~" +
                       format_compact(recommended) + " samples suggested for sigma*=" +
                       format_compact(report.sigma_star) +
                       "; the estimate may be noisy");
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.runtime_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();

  const BootstrapBands* bands_ptr = output.bands ? &*output.bands : nullptr;
  if (!config.out_report_json.empty()) {
    write_text_file(config.out_report_json, report_to_json(report));
  }
  if (!config.out_report_csv.empty()) {
    write_text_file(config.out_report_csv, report_to_csv(report));
  }
  if (!config.out_svg.empty()) {
    write_text_file(config.out_svg, render_svg(output.diagram, bands_ptr, report));
  }
  if (!config.out_curves.empty()) {
    write_text_file(config.out_curves, curves_to_csv(output.diagram, bands_ptr));
  }
  return output;
}

} // namespace calibsmooth
