// calib-smooth: measure calibration of binary-outcome predictions and emit
// a smoothed reliability diagram. See README.md for the file formats.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "calibsmooth/calibsmooth.hpp"

namespace {

int run_cli(const calibsmooth::RunConfig& config) {
  using namespace calibsmooth;
  try {
    const RunOutput output = run(config);
    const Report& report = output.report;
    std::printf("n           %zu\n", report.n);
    std::printf("smECE*      %.6f\n", report.smece_star);
    std::printf("sigma*      %.6f\n", report.sigma_star);
    std::printf("tilde smECE %.6f\n", report.tilde_smece);
    std::printf("binned ECE  %.6f (%d bins)\n", report.binned_ece, report.bins_used);
    if (report.smece_ci) {
      std::printf("smECE* 95%% CI [%.6f, %.6f]\n", report.smece_ci->first,
                  report.smece_ci->second);
    }
    for (const std::string& w : report.warnings) {
      std::fprintf(stderr, "warning: %s\n", w.c_str());
    }
    if (report.runtime_ms) {
      std::fprintf(stderr, "runtime: %.1f ms\n", *report.runtime_ms);
    }
    return 0;
  } catch (const parse_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const input_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const resource_limit_error& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"SmoothECE calibration measure and smoothed reliability diagrams"};

  calibsmooth::RunConfig config;
  std::string format = "auto";
  std::string transform = "identity";
  int bins = 0;

  app.add_option("--input", config.input_path, "Input file of (prediction, outcome) pairs")
      ->required();
  app.add_option("--format", format, "Input format")
      ->check(CLI::IsMember({"csv", "json", "auto"}))
      ->capture_default_str();
  app.add_option("--eps", config.eps, "Grid and search tolerance")->capture_default_str();
  app.add_option("--transform", transform, "Prediction-space metric")
      ->check(CLI::IsMember({"identity", "logit"}))
      ->capture_default_str();
  app.add_option("--bootstrap", config.bootstrap_resamples,
                 "Bootstrap resamples (0 disables)")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for bootstrap and cross-validation")
      ->capture_default_str();
  app.add_option("--bins", bins, "Fixed bin count for BinnedECE (default: cross-validated)");
  app.add_option("--out-report-json", config.out_report_json, "Write the report as JSON");
  app.add_option("--out-report-csv", config.out_report_csv, "Write the report as CSV");
  app.add_option("--out-svg", config.out_svg, "Write the reliability diagram as SVG");
  app.add_option("--out-curves", config.out_curves, "Write the diagram curves as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (format == "csv") config.input_format = calibsmooth::InputFormat::csv;
  if (format == "json") config.input_format = calibsmooth::InputFormat::json;
  if (transform == "logit") config.transform = calibsmooth::TransformKind::logit;
  if (bins > 0) config.bins_override = bins;

  return run_cli(config);
}
