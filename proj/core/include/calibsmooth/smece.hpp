#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "calibsmooth/dataset.hpp"
#include "calibsmooth/kernel.hpp"

namespace calibsmooth {

inline constexpr double kDefaultEps = 1e-3;

// Per-bucket sums of residuals z_i = f_i - y_i on the grid 0..M (bucket
// b collects samples with round(M*f) == b; f = 1 lands in bucket M).
struct ResidualHistogram {
  std::vector<double> buckets; // length M+1
  std::size_t count = 0;       // n

  std::size_t grid_size() const { return buckets.size() - 1; } // M
};

// Result of the fixed-point bandwidth search.
struct SmeceResult {
  double sigma_star = 0.0;
  double value = 0.0; // smECE at sigma_star
  int iterations = 0;
  std::vector<std::pair<double, double>> trace; // (sigma, smECE_sigma) per evaluation
};

ResidualHistogram discretize(const Dataset& dataset, std::size_t grid_size);

// Extends a histogram over buckets 0..M to the reflection periods
// [-T, T+1]: output index i holds h[fold(i - T*M)] where fold reflects
// modulo 2M at 0 and M. Length (2T+1)*M + 1; original window sits at
// [T*M, (T+1)*M].
std::vector<double> wrap(const ResidualHistogram& histogram, int wrap_depth);

// smECE at a fixed scale: discretize residuals, convolve the wrapped
// histogram with the discrete Gaussian, and average |.| over the central
// window. Deterministic; value lies in [0, E|f-y|].
double smece_at_scale(const Dataset& dataset, double sigma, double eps = kDefaultEps);

// Binary search for the unique sigma* with smECE_{sigma*} = sigma*
// (smECE_sigma is non-increasing in sigma, so g(sigma) = smECE_sigma - sigma
// crosses zero once). Brackets [0,1], shrinks until u - l <= eps, returns u.
SmeceResult smece_fixed_point(const Dataset& dataset, double eps = kDefaultEps);

namespace detail {

// Convolution of the wrapped histogram with the kernel, evaluated on
// window indices [T*M + first, T*M + last] of the wrapped signal.
// Chooses between dense FFT and sparse direct accumulation by cost.
std::vector<double> convolve_wrapped(const ResidualHistogram& hist,
                                     const DiscreteKernel& kernel, int wrap_depth,
                                     std::ptrdiff_t first, std::ptrdiff_t last);

// |field| integrated over a sign-change cell, on a cubic reconstruction
// through the four surrounding samples.
double kink_cell_integral(double before, double a, double b, double after);

} // namespace detail

} // namespace calibsmooth
