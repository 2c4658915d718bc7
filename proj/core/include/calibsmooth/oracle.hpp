#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "calibsmooth/dataset.hpp"

// Slow reference implementations used by the test suites. None of these
// share code with the fast paths they check; expect O(n * quadrature) or
// worse.
namespace calibsmooth::oracle {

// smECE_sigma by composite Simpson quadrature with exact (non-discretized,
// non-FFT) reflected-kernel sums at every node.
double smece_direct(const Dataset& dataset, double sigma, int quadrature_points = 1000);

// Weak calibration error: max over w: support -> [-1,1], |w_a - w_b| <=
// |f_a - f_b|, of sum_i (f_i - y_i) w(f_i) / n. Exhaustive enumeration of
// w values on a grid of the given resolution (organized as a forward pass
// over the sorted support). Requires <= 6 distinct prediction values.
double wce_grid_search(const Dataset& dataset, double resolution = 0.01);

// Exact ECE of the discrete support: groups by identical prediction value.
double ece_exact(const Dataset& dataset);

// A constructed instance with analytically known weak calibration error.
// Duality pins dCE between wce/2 and wce.
struct AnalyticInstance {
  std::string description;
  std::function<Dataset(std::uint64_t seed, std::size_t n)> generate;
  double wce_exact;
  double dce_lo() const { return wce_exact / 2.0; }
  double dce_hi() const { return wce_exact; }
};

// Ten instances used by the consistency-sandwich suite. Generators place
// exact outcome counts so the empirical wCE equals the analytic value.
const std::vector<AnalyticInstance>& analytic_instances();

} // namespace calibsmooth::oracle
