#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calibsmooth/dataset.hpp"
#include "calibsmooth/diagram.hpp"

namespace calibsmooth {

enum class InputFormat { csv, json, auto_detect };
enum class TransformKind { identity, logit };

struct RunConfig {
  std::string input_path;
  InputFormat input_format = InputFormat::auto_detect;
  double eps = kDefaultEps;
  TransformKind transform = TransformKind::identity;
  int bootstrap_resamples = 100; // 0 disables
  std::uint64_t seed = 0;
  std::optional<int> bins_override;

  // Requested artifacts; at least one must be set.
  std::string out_report_json;
  std::string out_report_csv;
  std::string out_svg;
  std::string out_curves;

  void validate() const; // throws config_error
};

struct Report {
  std::size_t n = 0;
  double smece_star = 0.0;
  double sigma_star = 0.0;
  double tilde_smece = 0.0;
  double binned_ece = 0.0;
  int bins_used = 0;
  std::optional<std::pair<double, double>> smece_ci; // empty when bootstrap off
  std::optional<double> runtime_ms; // never serialized (byte-determinism); stderr only
  std::vector<std::string> warnings;
};

struct RunOutput {
  Report report;
  DiagramData diagram;
  std::optional<BootstrapBands> bands;
};

// Parses "f,y" CSV (optional single header line) or a JSON array of
// [f, y] pairs. Throws parse_error with the offending row, or input_error.
Dataset load_dataset(const std::string& path, InputFormat format = InputFormat::auto_detect);
Dataset parse_csv(const std::string& text);
Dataset parse_json(const std::string& text);

// Full pipeline: load, fixed point (identity or logit), diagram, CV bin
// selection, BinnedECE, optional bootstrap, artifact emission.
RunOutput run(const RunConfig& config);

// Serialization helpers (deterministic byte output; doubles printed as
// shortest round-trip decimals).
std::string report_to_json(const Report& report);
std::string report_to_csv(const Report& report);
std::string curves_to_csv(const DiagramData& diagram, const BootstrapBands* bands);

// Standalone SVG: unit square, diagonal, density-weighted regression
// ribbon, optional bootstrap band, annotation with smECE* and sigma*.
std::string render_svg(const DiagramData& diagram, const BootstrapBands* bands,
                       const Report& report);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

} // namespace calibsmooth
