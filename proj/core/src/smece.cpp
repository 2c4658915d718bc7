#include "calibsmooth/smece.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calibsmooth/fft.hpp"

namespace calibsmooth {

namespace {

// Folds a signed offset from the window start into a bucket index, i.e.
// the pull-back through pi_reflect on the grid: reflect modulo 2M at 0
// and M.
inline std::size_t fold_index(std::ptrdiff_t q, std::size_t m) {
  const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(m);
  std::ptrdiff_t r = q % period;
  if (r < 0) r += period;
  if (r > static_cast<std::ptrdiff_t>(m)) r = period - r;
  return static_cast<std::size_t>(r);
}

// Residual binning for the measure path. Nearest-bucket assignment moves
// every sample by up to half a cell, and that displacement re-randomizes
// whenever the grid changes with sigma; the resulting cross-scale noise
// (~1e-5) swamps the 1e-8 monotonicity contract. Splatting each residual
// through the cardinal cubic (Catmull-Rom) weights keeps the sample's
// exact position to O(cell^4), making evaluations at different scales
// agree on what distribution they measure. Grid-aligned samples reduce to
// the plain bucket assignment. Out-of-range taps fold through pi_reflect.
ResidualHistogram discretize_exact(const Dataset& dataset, std::size_t m) {
  ResidualHistogram hist;
  hist.buckets.assign(m + 1, 0.0);
  hist.count = dataset.size();
  // Compensated accumulation keeps the bucket sums order-independent to a
  // few ulps (permutation/duplication invariance is contracted at 1e-12).
  std::vector<double> comp(m + 1, 0.0);
  auto add = [&](std::size_t b, double value) {
    const double y = value - comp[b];
    const double t = hist.buckets[b] + y;
    comp[b] = (t - hist.buckets[b]) - y;
    hist.buckets[b] = t;
  };
  const double scale = static_cast<double>(m);
  for (const Sample& s : dataset) {
    const double z = s.f - s.y;
    if (z == 0.0) continue;
    const double pos = scale * s.f;
    const double base = std::floor(pos);
    const double t = pos - base;
    const auto b = static_cast<std::ptrdiff_t>(base);

    const double w_m1 = ((-0.5 * t + 1.0) * t - 0.5) * t;
    const double w_0 = (1.5 * t - 2.5) * t * t + 1.0;
    const double w_p1 = ((-1.5 * t + 2.0) * t + 0.5) * t;
    const double w_p2 = (0.5 * t - 0.5) * t * t;

    add(fold_index(b - 1, m), z * w_m1);
    add(fold_index(b, m), z * w_0);
    add(fold_index(b + 1, m), z * w_p1);
    add(fold_index(b + 2, m), z * w_p2);
  }
  return hist;
}

} // namespace

ResidualHistogram discretize(const Dataset& dataset, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("discretize: grid size must be >= 2");
  ResidualHistogram hist;
  hist.buckets.assign(grid_size + 1, 0.0);
  hist.count = dataset.size();
  const double m = static_cast<double>(grid_size);
  for (const Sample& s : dataset) {
    auto b = static_cast<std::size_t>(std::llround(m * s.f));
    hist.buckets[b] += s.f - s.y;
  }
  return hist;
}

std::vector<double> wrap(const ResidualHistogram& histogram, int wrap_depth) {
  if (wrap_depth < 1) throw std::invalid_argument("wrap: depth must be >= 1");
  const std::size_t m = histogram.grid_size();
  const std::size_t len = static_cast<std::size_t>(2 * wrap_depth + 1) * m + 1;
  const std::ptrdiff_t window_start = static_cast<std::ptrdiff_t>(wrap_depth) * static_cast<std::ptrdiff_t>(m);
  std::vector<double> wrapped(len);
  for (std::size_t i = 0; i < len; ++i) {
    wrapped[i] = histogram.buckets[fold_index(static_cast<std::ptrdiff_t>(i) - window_start, m)];
  }
  return wrapped;
}

namespace detail {

// Integral of |field| over one grid cell that contains a sign change. The
// field is reconstructed by Catmull-Rom interpolation through the four
// surrounding samples and integrated piecewise-linearly on a 4x refined
// mesh; the refinement keeps the kink's grid-phase error well below the
// monotonicity slack.
double kink_cell_integral(double before, double a, double b, double after) {
  auto segment = [](double u, double v) {
    if (u * v >= 0.0) return 0.5 * (std::fabs(u) + std::fabs(v));
    return 0.5 * (u * u + v * v) / (std::fabs(u) + std::fabs(v));
  };
  double nodes[5];
  nodes[0] = a;
  nodes[4] = b;
  for (int k = 1; k < 4; ++k) {
    const double t = 0.25 * k;
    const double w_m1 = ((-0.5 * t + 1.0) * t - 0.5) * t;
    const double w_0 = (1.5 * t - 2.5) * t * t + 1.0;
    const double w_p1 = ((-1.5 * t + 2.0) * t + 0.5) * t;
    const double w_p2 = (0.5 * t - 0.5) * t * t;
    nodes[k] = w_m1 * before + w_0 * a + w_p1 * b + w_p2 * after;
  }
  double integral = 0.0;
  for (int k = 0; k < 4; ++k) integral += segment(nodes[k], nodes[k + 1]);
  return integral * 0.25;
}

// The wrapped signal uses measure semantics at the reflection fixed
// points: buckets 0 and M appear once per 2M period, so they carry twice
// their mass there. This matches the continuous reflected kernel (whose
// density doubles against a boundary atom) and keeps the half-period mass
// equal to the plain bucket total, independent of the grid.
std::vector<double> convolve_wrapped(const ResidualHistogram& hist,
                                     const DiscreteKernel& kernel, int wrap_depth,
                                     std::ptrdiff_t first, std::ptrdiff_t last) {
  const std::size_t m = hist.grid_size();
  const std::ptrdiff_t window_start = static_cast<std::ptrdiff_t>(wrap_depth * m);
  const std::ptrdiff_t domain_hi =
      static_cast<std::ptrdiff_t>((2 * wrap_depth + 1) * m); // inclusive
  const std::ptrdiff_t radius = kernel.radius;
  const std::ptrdiff_t lo = window_start + first;
  const std::ptrdiff_t hi = window_start + last;

  std::vector<double> out(static_cast<std::size_t>(last - first + 1), 0.0);

  // Sparse route: spray each reflected copy of each nonzero bucket through
  // the kernel. Worth it when the histogram is much sparser than the grid.
  std::vector<std::pair<std::ptrdiff_t, double>> copies;
  std::size_t nnz = 0;
  for (std::size_t j = 0; j <= m; ++j) {
    if (hist.buckets[j] != 0.0) ++nnz;
  }

  const std::ptrdiff_t reach_lo = std::max<std::ptrdiff_t>(0, lo - radius);
  const std::ptrdiff_t reach_hi = std::min(domain_hi, hi + radius);
  const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(m);

  const double slab_len = static_cast<double>(reach_hi - reach_lo + 1);
  const double fft_n = static_cast<double>(detail::next_pow2(
      static_cast<std::size_t>(slab_len) + kernel.support()));
  const double dense_cost = 15.0 * fft_n * std::log2(fft_n);
  const double kernel_len = static_cast<double>(kernel.support());

  bool use_sparse = static_cast<double>(nnz) * 3.0 * kernel_len < dense_cost;
  if (use_sparse) {
    for (std::size_t j = 0; j <= m; ++j) {
      double v = hist.buckets[j];
      if (v == 0.0) continue;
      // Copy positions: window_start +- j (mod 2M). The fixed points j = 0
      // and j = M have one (doubled) copy per period.
      const bool fixed_point = (j == 0 || j == m);
      if (fixed_point) v *= 2.0;
      for (int sign = 0; sign < (fixed_point ? 1 : 2); ++sign) {
        const std::ptrdiff_t base =
            window_start + (sign == 0 ? static_cast<std::ptrdiff_t>(j)
                                      : -static_cast<std::ptrdiff_t>(j));
        std::ptrdiff_t p = base - ((base - reach_lo) / period) * period;
        while (p - period >= reach_lo) p -= period;
        while (p < reach_lo) p += period;
        for (; p <= reach_hi; p += period) copies.emplace_back(p, v);
      }
    }
    if (static_cast<double>(copies.size()) * kernel_len >= dense_cost) use_sparse = false;
  }

  if (use_sparse) {
    for (const auto& [pos, value] : copies) {
      const std::ptrdiff_t d_lo = std::max(-radius, lo - pos);
      const std::ptrdiff_t d_hi = std::min(radius, hi - pos);
      const double* w = kernel.weights.data() + (radius + d_lo);
      double* o = out.data() + (pos + d_lo - lo);
      for (std::ptrdiff_t d = 0; d <= d_hi - d_lo; ++d) o[d] += value * w[d];
    }
    return out;
  }

  // Dense route: materialize the reachable slab of the wrapped signal and
  // convolve once with the FFT.
  std::vector<double> slab(static_cast<std::size_t>(reach_hi - reach_lo + 1));
  for (std::size_t t = 0; t < slab.size(); ++t) {
    const std::size_t j =
        fold_index(reach_lo + static_cast<std::ptrdiff_t>(t) - window_start, m);
    slab[t] = (j == 0 || j == m) ? 2.0 * hist.buckets[j] : hist.buckets[j];
  }
  std::vector<double> full = detail::linear_convolve_fft(slab, kernel.weights);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::ptrdiff_t q = (lo + static_cast<std::ptrdiff_t>(i)) - reach_lo + radius;
    out[i] = full[static_cast<std::size_t>(q)];
  }
  return out;
}

} // namespace detail

double smece_at_scale(const Dataset& dataset, double sigma, double eps) {
  // The wrap depth keeps the dropped Gaussian tail below the monotonicity
  // slack even for bandwidths near 1, where the eps-derived default is too
  // shallow.
  const int wrap_depth = std::max(KernelConfig::default_wrap_depth(eps),
                                  static_cast<int>(std::ceil(6.5 * sigma)));
  const KernelConfig config(sigma, eps, wrap_depth);
  // Floor the resolution: at large sigma the nominal grid 1/(sigma*eps)
  // gets coarse enough that its quadrature bias (~step^3 per kink cell)
  // breaks cross-scale monotonicity at the 1e-7 level. Large sigma means a
  // small nominal grid, so the floor costs nothing where grids are big.
  const std::size_t m = std::max<std::size_t>(config.grid_size(), 8192);
  const ResidualHistogram hist = discretize_exact(dataset, m);

  bool all_zero = true;
  for (double b : hist.buckets) {
    if (b != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return 0.0;

  const DiscreteKernel kernel = detail::sampled_gaussian(
      sigma * static_cast<double>(m),
      m * static_cast<std::size_t>(2 * wrap_depth + 1), 1.0 / static_cast<double>(m));
  const std::vector<double> conv = detail::convolve_wrapped(
      hist, kernel, config.wrap_depth, 0, static_cast<std::ptrdiff_t>(m));

  // Cell-wise integral of |field|. Over a half reflection period the
  // trapezoid sum is exact for the smooth part (mirror symmetry at the
  // window edges cancels the boundary terms), so the only grid-phase error
  // lives in sign-change cells; those are integrated on a cubic
  // reconstruction of the field instead. Without this the value wobbles by
  // ~1e-7 between scales, breaking the monotonicity contract.
  double sum = 0.0;
  const std::size_t last = conv.size() - 1;
  for (std::size_t i = 0; i < last; ++i) {
    const double a = conv[i];
    const double b = conv[i + 1];
    if (a * b >= 0.0) {
      sum += 0.5 * (std::fabs(a) + std::fabs(b));
    } else {
      // Virtual neighbors reflect at the window edges.
      const double before = i == 0 ? conv[1] : conv[i - 1];
      const double after = i + 2 > last ? conv[last - 1] : conv[i + 2];
      sum += detail::kink_cell_integral(before, a, b, after);
    }
  }
  return sum / static_cast<double>(dataset.size());
}

SmeceResult smece_fixed_point(const Dataset& dataset, double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) throw std::invalid_argument("eps must be in (0, 0.1]");

  SmeceResult result;
  double lower = 0.0;
  double upper = 1.0;
  while (upper - lower > eps) {
    const double sigma = 0.5 * (upper + lower);
    const double value = smece_at_scale(dataset, sigma, eps);
    result.trace.emplace_back(sigma, value);
    ++result.iterations;
    if (value < sigma) {
      upper = sigma;
    } else {
      lower = sigma;
    }
  }
  result.sigma_star = upper;
  result.value = smece_at_scale(dataset, upper, eps);
  return result;
}

} // namespace calibsmooth
