#include "calibsmooth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calibsmooth/diagram.hpp"
#include "calibsmooth/errors.hpp"
#include "calibsmooth/fft.hpp"
#include "calibsmooth/kernel.hpp"
#include "calibsmooth/rng.hpp"

namespace calibsmooth {

namespace {

constexpr std::size_t kMaxTransformCells = kMaxGridCells;

struct TransformedGrid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::size_t cells = 0; // grid points are 0..cells

  std::size_t bucket(double u) const {
    auto b = static_cast<std::ptrdiff_t>(std::llround((u - lo) / step));
    b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(cells));
    return static_cast<std::size_t>(b);
  }
};

// Residual masses on the transformed line, position-preserving (cardinal
// cubic splat, same scheme as the reflected path). The returned vector has
// two guard cells on each side so edge samples keep their exact positions.
constexpr std::size_t kGuard = 2;

std::vector<double> splat_residuals(const Dataset& dataset, const TransformSpec& transform,
                                    const TransformedGrid& grid) {
  std::vector<double> buckets(grid.cells + 1 + 2 * kGuard, 0.0);
  for (const Sample& s : dataset) {
    const double z = s.f - s.y;
    if (z == 0.0) continue;
    const double pos = (transform.forward(transform.clip(s.f)) - grid.lo) / grid.step;
    const double base = std::floor(pos);
    const double t = pos - base;
    const auto b = static_cast<std::size_t>(base + static_cast<double>(kGuard));

    const double w_m1 = ((-0.5 * t + 1.0) * t - 0.5) * t;
    const double w_0 = (1.5 * t - 2.5) * t * t + 1.0;
    const double w_p1 = ((-1.5 * t + 2.0) * t + 0.5) * t;
    const double w_p2 = (0.5 * t - 0.5) * t * t;

    buckets[b - 1] += z * w_m1;
    buckets[b] += z * w_0;
    buckets[b + 1] += z * w_p1;
    buckets[b + 2] += z * w_p2;
  }
  return buckets;
}

TransformedGrid make_grid(const TransformSpec& transform, double sigma, double eps,
                          std::size_t cell_cap = 0) {
  TransformedGrid grid;
  grid.lo = transform.range_lo();
  grid.hi = transform.range_hi();
  const double span = grid.hi - grid.lo;
  double cells = std::ceil(span / (sigma * eps));
  if (!(cells >= 2.0)) cells = 2.0;
  if (cell_cap > 0) {
    if (cells > static_cast<double>(cell_cap)) cells = static_cast<double>(cell_cap);
  } else if (cells > static_cast<double>(kMaxTransformCells)) {
    throw resource_limit_error("transformed grid exceeds the configured cap");
  }
  grid.cells = static_cast<std::size_t>(cells);
  grid.step = span / static_cast<double>(grid.cells);
  return grid;
}

// Plain (non-reflected) Gaussian convolution of bucket masses; returns the
// full linear extent so the |.| sum covers everything the kernel reaches.
std::vector<double> convolve_plain(const std::vector<double>& buckets,
                                   const DiscreteKernel& kernel) {
  std::size_t nnz = 0;
  for (double v : buckets) {
    if (v != 0.0) ++nnz;
  }
  const double fft_n = static_cast<double>(
      detail::next_pow2(buckets.size() + kernel.support() - 1));
  const bool sparse = static_cast<double>(nnz) * static_cast<double>(kernel.support()) <
                      15.0 * fft_n * std::log2(fft_n);
  if (!sparse) return detail::linear_convolve_fft(buckets, kernel.weights);

  std::vector<double> out(buckets.size() + kernel.support() - 1, 0.0);
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    const double v = buckets[j];
    if (v == 0.0) continue;
    double* o = out.data() + j;
    const double* w = kernel.weights.data();
    for (std::size_t d = 0; d < kernel.support(); ++d) o[d] += v * w[d];
  }
  return out;
}

} // namespace

TransformSpec::TransformSpec(Kind kind, std::string name, std::function<double(double)> fwd,
                             std::function<double(double)> inv, double clamp)
  : kind_(kind), name_(std::move(name)), fwd_(std::move(fwd)), inv_(std::move(inv)),
    clamp_(clamp) {
  validate();
}

TransformSpec TransformSpec::identity() {
  return TransformSpec(Kind::identity, "identity", [](double f) { return f; },
                       [](double u) { return u; }, 0.0);
}

TransformSpec TransformSpec::logit(double clamp) {
  if (!(clamp > 0.0 && clamp < 0.5)) throw config_error("logit clamp must be in (0, 0.5)");
  return TransformSpec(
      Kind::logit, "logit", [](double f) { return std::log(f / (1.0 - f)); },
      [](double u) { return 1.0 / (1.0 + std::exp(-u)); }, clamp);
}

TransformSpec TransformSpec::custom(std::function<double(double)> fwd,
                                    std::function<double(double)> inv, double clamp) {
  return TransformSpec(Kind::custom, "custom", std::move(fwd), std::move(inv), clamp);
}

double TransformSpec::clip(double f) const {
  return std::clamp(f, clamp_, 1.0 - clamp_);
}

void TransformSpec::validate() const {
  if (!(clamp_ >= 0.0 && clamp_ < 0.5)) throw config_error("clamp must be in [0, 0.5)");
  const int probes = 33;
  double prev = 0.0;
  for (int i = 0; i < probes; ++i) {
    const double f = clamp_ + (1.0 - 2.0 * clamp_) * static_cast<double>(i) /
                                  static_cast<double>(probes - 1);
    const double u = fwd_(f);
    if (!std::isfinite(u)) throw config_error("transform not finite on the clamped range");
    if (i > 0 && !(u > prev)) throw config_error("transform is not strictly increasing");
    prev = u;
    const double back = fwd_(inv_(u));
    if (std::fabs(back - u) > 1e-9 * std::max(1.0, std::fabs(u))) {
      throw config_error("transform inverse does not round-trip");
    }
  }
}

double smece_h_at_scale(const Dataset& dataset, const TransformSpec& transform,
                        double sigma, double eps) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(eps > 0.0 && eps <= 0.1)) throw std::invalid_argument("eps must be in (0, 0.1]");

  bool any = false;
  for (const Sample& s : dataset) {
    if (s.f != s.y) {
      any = true;
      break;
    }
  }
  if (!any) return 0.0;

  const TransformedGrid grid = make_grid(transform, sigma, eps);
  const std::vector<double> buckets = splat_residuals(dataset, transform, grid);

  const DiscreteKernel kernel =
      detail::sampled_gaussian(sigma / grid.step, buckets.size(), grid.step);
  const std::vector<double> conv = convolve_plain(buckets, kernel);

  // Integral of |field| over the full line, cell by cell; sign-change
  // cells get the cubic treatment so the value is stable across grids.
  // The half-cell stubs past the ends close the trapezoid (the field is
  // essentially zero there, 8 sigma from any mass).
  double sum = 0.5 * (std::fabs(conv.front()) + std::fabs(conv.back()));
  for (std::size_t i = 0; i + 1 < conv.size(); ++i) {
    const double a = conv[i];
    const double b = conv[i + 1];
    if (a * b >= 0.0) {
      sum += 0.5 * (std::fabs(a) + std::fabs(b));
    } else {
      const double before = i == 0 ? 0.0 : conv[i - 1];
      const double after = i + 2 >= conv.size() ? 0.0 : conv[i + 2];
      sum += detail::kink_cell_integral(before, a, b, after);
    }
  }
  return sum / static_cast<double>(dataset.size());
}

SmeceResult smece_h_fixed_point(const Dataset& dataset, const TransformSpec& transform,
                                double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) throw std::invalid_argument("eps must be in (0, 0.1]");

  SmeceResult result;
  double lower = 0.0;
  double upper = transform.range_hi() - transform.range_lo();
  while (upper - lower > eps) {
    const double sigma = 0.5 * (upper + lower);
    const double value = smece_h_at_scale(dataset, transform, sigma, eps);
    result.trace.emplace_back(sigma, value);
    ++result.iterations;
    if (value < sigma) {
      upper = sigma;
    } else {
      lower = sigma;
    }
  }
  result.sigma_star = upper;
  result.value = smece_h_at_scale(dataset, transform, upper, eps);
  return result;
}

namespace detail {

HCurves h_curves(const Dataset& dataset, const TransformSpec& transform, double sigma,
                 double eps, std::size_t cell_cap) {
  const TransformedGrid grid = make_grid(transform, sigma, eps, cell_cap);
  std::vector<double> mass_y(grid.cells + 1, 0.0), mass_n(grid.cells + 1, 0.0);
  for (const Sample& s : dataset) {
    const std::size_t b = grid.bucket(transform.forward(transform.clip(s.f)));
    mass_y[b] += s.y;
    mass_n[b] += 1.0;
  }
  const DiscreteKernel kernel =
      detail::sampled_gaussian(sigma / grid.step, mass_n.size(), grid.step);
  const std::vector<double> conv_y = convolve_plain(mass_y, kernel);
  const std::vector<double> conv_n = convolve_plain(mass_n, kernel);

  HCurves curves;
  curves.grid_h.resize(grid.cells + 1);
  curves.mu.assign(grid.cells + 1, -1.0);
  curves.density.resize(grid.cells + 1);
  const std::size_t offset = static_cast<std::size_t>(kernel.radius);
  const double n = static_cast<double>(dataset.size());
  for (std::size_t b = 0; b <= grid.cells; ++b) {
    curves.grid_h[b] = grid.lo + static_cast<double>(b) * grid.step;
    if (conv_n[b + offset] > 1e-300) curves.mu[b] = conv_y[b + offset] / conv_n[b + offset];
    curves.density[b] = conv_n[b + offset] / (grid.step * n);
  }
  fill_from_nearest(curves.mu);

  double mass = 0.0;
  for (std::size_t b = 0; b < grid.cells; ++b) {
    mass += 0.5 * (curves.density[b] + curves.density[b + 1]);
  }
  mass *= grid.step;
  if (mass > 0.0) {
    for (double& d : curves.density) d /= mass;
  }
  return curves;
}

} // namespace detail

RecalibrationResult recalibrate(const Dataset& dataset, const TransformSpec& transform,
                                double eps, std::uint64_t seed) {
  const SmeceResult fixed_point = smece_h_fixed_point(dataset, transform, eps);
  const double sigma = std::max(fixed_point.sigma_star, 1e-12);
  const double lo = transform.range_lo();
  const double hi = transform.range_hi();

  const std::size_t n = dataset.size();
  Rng rng(seed);
  std::vector<double> noisy(n); // positions in h-space after projection
  for (std::size_t i = 0; i < n; ++i) {
    const double u = transform.forward(transform.clip(dataset[i].f));
    noisy[i] = std::clamp(u + sigma * rng.next_normal(), lo, hi);
  }

  // Kernel regression estimate of E[y | noisy prediction], same bandwidth.
  const TransformedGrid grid = make_grid(transform, sigma, eps, std::size_t(1) << 21);
  std::vector<double> mass_y(grid.cells + 1, 0.0), mass_n(grid.cells + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = grid.bucket(noisy[i]);
    mass_y[b] += dataset[i].y;
    mass_n[b] += 1.0;
  }
  const DiscreteKernel kernel =
      detail::sampled_gaussian(sigma / grid.step, mass_n.size(), grid.step);
  const std::vector<double> conv_y = convolve_plain(mass_y, kernel);
  const std::vector<double> conv_n = convolve_plain(mass_n, kernel);

  std::vector<Sample> mapped;
  mapped.reserve(n);
  double displacement = 0.0;
  const std::size_t offset = static_cast<std::size_t>(kernel.radius);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t q = grid.bucket(noisy[i]) + offset;
    const double den = conv_n[q];
    const double estimate = den > 1e-300 ? conv_y[q] / den : dataset[i].y;
    mapped.push_back({std::clamp(estimate, 0.0, 1.0), dataset[i].y});
    const double u_orig = transform.forward(transform.clip(dataset[i].f));
    const double u_new = transform.forward(transform.clip(estimate));
    displacement += std::fabs(u_new - u_orig);
  }
  displacement /= static_cast<double>(n);

  return RecalibrationResult{Dataset(std::move(mapped)), displacement, fixed_point.sigma_star};
}

} // namespace calibsmooth
