#pragma once

#include <cstddef>
#include <vector>

namespace calibsmooth {

// Hard cap on total wrapped-grid cells M*(2T+1); exceeding it raises
// resource_limit_error rather than attempting a huge allocation.
inline constexpr std::size_t kMaxGridCells = std::size_t(1) << 24;

// Discretization parameters for kernel smoothing on [0,1].
//
// sigma      bandwidth of the Gaussian, in prediction units
// eps        grid/accuracy tolerance; the grid has M = ceil(1/(sigma*eps)) cells
// wrap_depth number of reflection periods kept on each side of [0,1]
struct KernelConfig {
  double sigma;
  double eps;
  int wrap_depth;

  KernelConfig(double sigma_, double eps_);
  KernelConfig(double sigma_, double eps_, int wrap_depth_);

  std::size_t grid_size() const { return grid_size_; } // M

  // Reflection copies needed so the dropped Gaussian tail is < eps:
  // T = ceil(sqrt(log(2/eps))), floored at 1.
  static int default_wrap_depth(double eps);

private:
  void validate();
  std::size_t grid_size_ = 0;
};

// Sampled Gaussian on grid offsets [-radius, radius], normalized to sum
// exactly 1. weights[radius + d] is the weight of offset d.
struct DiscreteKernel {
  std::vector<double> weights;
  double grid_step; // 1/M
  std::ptrdiff_t radius;

  double at(std::ptrdiff_t offset) const {
    return (offset < -radius || offset > radius) ? 0.0
                                                 : weights[static_cast<std::size_t>(offset + radius)];
  }
  std::size_t support() const { return weights.size(); } // 2*radius + 1
};

// The reflection map R -> [0,1]: identity on [0,1], folds the rest by
// reflections around integers. 1-Lipschitz, idempotent on [0,1].
double pi_reflect(double x);

// Reflected Gaussian kernel value K~(x, y) at scale sigma: the Gaussian
// density summed over the 2*wrap_depth+1 preimages of x nearest [0,1].
// Symmetric in (x, y); integrates to 1 in either argument over [0,1].
double reflected_kernel_weight(double x, double y, double sigma, int wrap_depth = 8);

// Sampled, truncated, normalized Gaussian for grid convolution. Support
// radius is min(8*sigma*M, full wrapped width) offsets; the truncated tail
// mass is far below eps^2.
DiscreteKernel build_discrete_kernel(const KernelConfig& config);

namespace detail {

// Same construction for an arbitrary grid (bandwidth measured in cells).
DiscreteKernel sampled_gaussian(double sigma_cells, std::size_t max_radius, double grid_step);

} // namespace detail

} // namespace calibsmooth
