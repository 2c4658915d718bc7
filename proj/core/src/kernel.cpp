#include "calibsmooth/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calibsmooth/errors.hpp"

namespace calibsmooth {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

} // namespace

KernelConfig::KernelConfig(double sigma_, double eps_)
  : sigma(sigma_), eps(eps_), wrap_depth(default_wrap_depth(eps_)) {
  validate();
}

KernelConfig::KernelConfig(double sigma_, double eps_, int wrap_depth_)
  : sigma(sigma_), eps(eps_), wrap_depth(wrap_depth_) {
  validate();
}

int KernelConfig::default_wrap_depth(double eps) {
  if (!(eps > 0.0)) return 1;
  int t = static_cast<int>(std::ceil(std::sqrt(std::log(2.0 / eps))));
  return std::max(1, t);
}

void KernelConfig::validate() {
  require(std::isfinite(sigma) && sigma > 0.0 && sigma <= 1.0, "sigma must be in (0, 1]");
  require(std::isfinite(eps) && eps > 0.0 && eps <= 0.1, "eps must be in (0, 0.1]");
  require(sigma >= eps * eps, "sigma below eps^2 is not representable");
  require(wrap_depth >= 1, "wrap_depth must be >= 1");

  double cells = std::ceil(1.0 / (sigma * eps));
  if (cells * (2.0 * wrap_depth + 1.0) > static_cast<double>(kMaxGridCells)) {
    throw resource_limit_error("grid of " + std::to_string(cells) + " cells x " +
                               std::to_string(2 * wrap_depth + 1) +
                               " reflection periods exceeds the configured cap");
  }
  grid_size_ = static_cast<std::size_t>(cells);
  if (grid_size_ < 2) grid_size_ = 2;
}

double pi_reflect(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("pi_reflect: non-finite input");
  double m = std::fmod(x, 2.0);
  if (m < 0.0) m += 2.0;
  return m <= 1.0 ? m : 2.0 - m;
}

double reflected_kernel_weight(double x, double y, double sigma, int wrap_depth) {
  require(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0, "kernel arguments must be in [0,1]");
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be positive");
  require(wrap_depth >= 1, "wrap_depth must be >= 1");

  // One preimage of x per unit interval [m, m+1], m = -T..T.
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * sigma);
  double sum = 0.0;
  for (int m = -wrap_depth; m <= wrap_depth; ++m) {
    double preimage = (m % 2 == 0) ? m + x : m + 1 - x;
    double d = (preimage - y) / sigma;
    sum += std::exp(-0.5 * d * d);
  }
  return sum * norm;
}

namespace detail {

DiscreteKernel sampled_gaussian(double sigma_cells, std::size_t max_radius, double grid_step) {
  // 8 sigma of support: truncated mass ~1e-15, far below eps^2. Never wider
  // than the signal it will be convolved with.
  std::size_t radius = static_cast<std::size_t>(std::ceil(8.0 * sigma_cells));
  radius = std::min(radius, max_radius);
  radius = std::max<std::size_t>(radius, 1);

  DiscreteKernel kernel;
  kernel.grid_step = grid_step;
  kernel.radius = static_cast<std::ptrdiff_t>(radius);
  kernel.weights.resize(2 * radius + 1);

  double total = 0.0;
  for (std::size_t i = 0; i < kernel.weights.size(); ++i) {
    double d = (static_cast<double>(i) - static_cast<double>(radius)) / sigma_cells;
    kernel.weights[i] = std::exp(-0.5 * d * d);
    total += kernel.weights[i];
  }
  for (double& w : kernel.weights) w /= total;
  return kernel;
}

} // namespace detail

DiscreteKernel build_discrete_kernel(const KernelConfig& config) {
  const std::size_t m = config.grid_size();
  return detail::sampled_gaussian(config.sigma * static_cast<double>(m),
                                  m * static_cast<std::size_t>(2 * config.wrap_depth + 1),
                                  1.0 / static_cast<double>(m));
}

} // namespace calibsmooth
