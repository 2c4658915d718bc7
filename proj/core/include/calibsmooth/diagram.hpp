#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "calibsmooth/dataset.hpp"
#include "calibsmooth/smece.hpp"

namespace calibsmooth {

// Curve grids are for plotting; cap them so bootstrap bands and SVG stay
// desk-sized even when sigma* (hence the measure grid) is tiny.
inline constexpr std::size_t kMaxDiagramCells = 16384;

// Everything needed to draw a smoothed reliability diagram.
struct DiagramData {
  std::vector<double> grid;      // M+1 points in [0,1]
  std::vector<double> mu_hat;    // kernel regression of outcomes
  std::vector<double> delta_hat; // prediction density, integrates to 1
  double sigma_used = 0.0;
  double tilde_smece = 0.0;
  double smece_star = 0.0;
};

struct BootstrapBands {
  int resamples = 0;
  std::uint64_t seed = 0;
  std::pair<double, double> smece_ci{0.0, 0.0};
  std::vector<std::pair<double, double>> mu_band; // per grid point (lo, hi)
};

// Nadaraya-Watson estimate of E[y | f = t] on the grid, via two wrapped
// convolutions (outcome mass / total mass). Values lie in [min y, max y].
std::vector<double> mu_hat_curve(const Dataset& dataset, double sigma, std::size_t grid_size);

// Kernel density estimate of the predictions on the grid, normalized so
// the trapezoid integral is exactly 1.
std::vector<double> delta_hat_curve(const Dataset& dataset, double sigma, std::size_t grid_size);

// The diagram-native measure: integral of |mu_hat(t) - t| * delta_hat(t).
// Stays within sqrt(2/pi)*sigma of smECE_sigma.
double tilde_smece(const Dataset& dataset, double sigma, double eps = kDefaultEps);

// Classic equal-width-bin ECE: sum_b (n_b/n) |mean(y in b) - mean(f in b)|.
double binned_ece(const Dataset& dataset, int bins);

// Picks the bin count minimizing mean held-out squared error of histogram
// regression (k-fold CV, seeded shuffle). Ties break toward fewer bins.
int select_bins_cv(const Dataset& dataset, const std::vector<int>& candidates,
                   int folds, std::uint64_t seed);

// Pairs bootstrap: B resamples with replacement; smECE* recomputed per
// resample, mu curves evaluated at the point estimate's sigma*.
// Percentile 2.5/97.5 intervals; bitwise-reproducible for a fixed seed.
BootstrapBands bootstrap(const Dataset& dataset, int resamples, std::uint64_t seed,
                         double eps = kDefaultEps);

// Runs the fixed point, then evaluates all curves at sigma = sigma*.
DiagramData build_diagram(const Dataset& dataset, double eps = kDefaultEps);

namespace detail {

std::size_t diagram_grid_size(double sigma, double eps);
double percentile(std::vector<double> values, double p);

// Replaces negative sentinel entries with the nearest valid value.
void fill_from_nearest(std::vector<double>& values);

// Threaded percentile bootstrap over arbitrary statistic/curve functors;
// resamples are indexed by deterministic child seeds so the result is
// independent of scheduling.
BootstrapBands bootstrap_with(const Dataset& dataset, int resamples, std::uint64_t seed,
                              const std::function<double(const Dataset&)>& statistic,
                              const std::function<std::vector<double>(const Dataset&)>& curve);

} // namespace detail

} // namespace calibsmooth
