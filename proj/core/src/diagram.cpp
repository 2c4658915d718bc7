#include "calibsmooth/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "calibsmooth/kernel.hpp"
#include "calibsmooth/rng.hpp"

namespace calibsmooth {

namespace detail {

std::size_t diagram_grid_size(double sigma, double eps) {
  double cells = std::ceil(1.0 / (sigma * eps));
  if (!(cells >= 2.0)) cells = 2.0;
  if (cells > static_cast<double>(kMaxDiagramCells)) cells = static_cast<double>(kMaxDiagramCells);
  return static_cast<std::size_t>(cells);
}

double percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  if (values.size() == 1) return values[0];
  const double h = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

} // namespace detail

namespace {

struct CurvePair {
  std::vector<double> mu;
  std::vector<double> density; // normalized
};

} // namespace

namespace detail {

// Ties go to the left neighbor.
void fill_from_nearest(std::vector<double>& values) {
  const std::size_t n = values.size();
  constexpr auto kNone = std::numeric_limits<std::ptrdiff_t>::max();
  std::vector<std::ptrdiff_t> left(n, kNone), right(n, kNone);
  std::ptrdiff_t last = kNone;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] >= 0.0) last = static_cast<std::ptrdiff_t>(i);
    left[i] = last;
  }
  last = kNone;
  for (std::size_t i = n; i-- > 0;) {
    if (values[i] >= 0.0) last = static_cast<std::ptrdiff_t>(i);
    right[i] = last;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] >= 0.0) continue;
    const std::ptrdiff_t l = left[i];
    const std::ptrdiff_t r = right[i];
    if (l == kNone && r == kNone) continue;
    if (l == kNone) {
      values[i] = values[static_cast<std::size_t>(r)];
    } else if (r == kNone) {
      values[i] = values[static_cast<std::size_t>(l)];
    } else {
      const auto dl = static_cast<std::ptrdiff_t>(i) - l;
      const auto dr = r - static_cast<std::ptrdiff_t>(i);
      values[i] = values[static_cast<std::size_t>(dl <= dr ? l : r)];
    }
  }
}

} // namespace detail

namespace {

// Outcome-mass and total-mass convolutions on the inclusive grid 0..M.
CurvePair compute_curves(const Dataset& dataset, double sigma, std::size_t grid_size) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  const std::size_t m = grid_size;
  const int wrap_depth = std::max(KernelConfig::default_wrap_depth(kDefaultEps),
                                  static_cast<int>(std::ceil(6.5 * sigma)));
  const DiscreteKernel kernel = detail::sampled_gaussian(
      sigma * static_cast<double>(m),
      m * static_cast<std::size_t>(2 * wrap_depth + 1), 1.0 / static_cast<double>(m));

  ResidualHistogram outcome_mass, total_mass;
  outcome_mass.buckets.assign(m + 1, 0.0);
  total_mass.buckets.assign(m + 1, 0.0);
  outcome_mass.count = total_mass.count = dataset.size();
  const double scale = static_cast<double>(m);
  for (const Sample& s : dataset) {
    auto b = static_cast<std::size_t>(std::llround(scale * s.f));
    outcome_mass.buckets[b] += s.y;
    total_mass.buckets[b] += 1.0;
  }

  const auto conv_y = detail::convolve_wrapped(outcome_mass, kernel, wrap_depth, 0,
                                               static_cast<std::ptrdiff_t>(m));
  const auto conv_c = detail::convolve_wrapped(total_mass, kernel, wrap_depth, 0,
                                               static_cast<std::ptrdiff_t>(m));

  CurvePair curves;
  curves.mu.assign(m + 1, -1.0);
  curves.density.resize(m + 1);

  for (std::size_t b = 0; b <= m; ++b) {
    if (conv_c[b] > 1e-300) curves.mu[b] = conv_y[b] / conv_c[b];
  }
  // Where the truncated kernel mass underflowed to zero, take the nearest
  // computed value (the Nadaraya-Watson limit far from all data).
  detail::fill_from_nearest(curves.mu);

  const double n = static_cast<double>(dataset.size());
  for (std::size_t b = 0; b <= m; ++b) {
    curves.density[b] = conv_c[b] * scale / n;
  }
  // Trapezoid mass is 1 - O(1/M) (boundary buckets fold onto themselves);
  // normalize so the density integrates to 1 exactly.
  double mass = 0.0;
  for (std::size_t b = 0; b < m; ++b) mass += 0.5 * (curves.density[b] + curves.density[b + 1]);
  mass /= scale;
  if (mass > 0.0) {
    for (double& d : curves.density) d /= mass;
  }
  return curves;
}

std::vector<double> make_grid(std::size_t m) {
  std::vector<double> grid(m + 1);
  for (std::size_t b = 0; b <= m; ++b) grid[b] = static_cast<double>(b) / static_cast<double>(m);
  return grid;
}

double tilde_from_curves(const CurvePair& curves, std::size_t m) {
  double integral = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    const double t0 = static_cast<double>(b) / static_cast<double>(m);
    const double t1 = static_cast<double>(b + 1) / static_cast<double>(m);
    const double f0 = std::fabs(curves.mu[b] - t0) * curves.density[b];
    const double f1 = std::fabs(curves.mu[b + 1] - t1) * curves.density[b + 1];
    integral += 0.5 * (f0 + f1);
  }
  return integral / static_cast<double>(m);
}

Dataset resample_with_replacement(const Dataset& dataset, Rng& rng) {
  const std::size_t n = dataset.size();
  std::vector<Sample> picked;
  picked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    picked.push_back(dataset[static_cast<std::size_t>(rng.next_below(n))]);
  }
  return Dataset(std::move(picked));
}

} // namespace

std::vector<double> mu_hat_curve(const Dataset& dataset, double sigma, std::size_t grid_size) {
  return compute_curves(dataset, sigma, grid_size).mu;
}

std::vector<double> delta_hat_curve(const Dataset& dataset, double sigma, std::size_t grid_size) {
  return compute_curves(dataset, sigma, grid_size).density;
}

double tilde_smece(const Dataset& dataset, double sigma, double eps) {
  const std::size_t m = detail::diagram_grid_size(sigma, eps);
  return tilde_from_curves(compute_curves(dataset, sigma, m), m);
}

double binned_ece(const Dataset& dataset, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  std::vector<double> sum_y(bins, 0.0), sum_f(bins, 0.0), count(bins, 0.0);
  for (const Sample& s : dataset) {
    int b = std::min(bins - 1, static_cast<int>(s.f * bins));
    sum_y[b] += s.y;
    sum_f[b] += s.f;
    count[b] += 1.0;
  }
  double total = 0.0;
  for (int b = 0; b < bins; ++b) {
    if (count[b] > 0.0) total += std::fabs(sum_y[b] - sum_f[b]);
  }
  return total / static_cast<double>(dataset.size());
}

int select_bins_cv(const Dataset& dataset, const std::vector<int>& candidates,
                   int folds, std::uint64_t seed) {
  if (candidates.empty()) throw std::invalid_argument("bin candidate list is empty");
  if (folds < 2) throw std::invalid_argument("folds must be >= 2");
  if (dataset.size() < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("dataset smaller than fold count");
  }

  const std::size_t n = dataset.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i-- > 1;) {
    std::swap(order[i], order[static_cast<std::size_t>(rng.next_below(i + 1))]);
  }

  std::vector<int> fold_of(n);
  for (std::size_t i = 0; i < n; ++i) fold_of[order[i]] = static_cast<int>(i % folds);

  std::vector<int> sorted = candidates;
  std::sort(sorted.begin(), sorted.end());

  int best_bins = sorted.front();
  double best_mse = 0.0;
  bool first = true;
  for (int bins : sorted) {
    if (bins < 1) throw std::invalid_argument("bin candidates must be positive");
    double error_sum = 0.0;
    std::size_t tested = 0;
    for (int fold = 0; fold < folds; ++fold) {
      std::vector<double> sum_y(bins, 0.0), cnt(bins, 0.0);
      double global_y = 0.0, global_n = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (fold_of[i] == fold) continue;
        int b = std::min(bins - 1, static_cast<int>(dataset[i].f * bins));
        sum_y[b] += dataset[i].y;
        cnt[b] += 1.0;
        global_y += dataset[i].y;
        global_n += 1.0;
      }
      const double fallback = global_n > 0.0 ? global_y / global_n : 0.5;
      for (std::size_t i = 0; i < n; ++i) {
        if (fold_of[i] != fold) continue;
        int b = std::min(bins - 1, static_cast<int>(dataset[i].f * bins));
        const double pred = cnt[b] > 0.0 ? sum_y[b] / cnt[b] : fallback;
        const double err = pred - dataset[i].y;
        error_sum += err * err;
        ++tested;
      }
    }
    const double mse = error_sum / static_cast<double>(tested);
    if (first || mse < best_mse) {
      best_mse = mse;
      best_bins = bins;
      first = false;
    }
  }
  return best_bins;
}

namespace detail {

BootstrapBands bootstrap_with(const Dataset& dataset, int resamples, std::uint64_t seed,
                              const std::function<double(const Dataset&)>& statistic,
                              const std::function<std::vector<double>(const Dataset&)>& curve) {
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least 2 resamples");

  std::vector<double> stat_values(resamples);
  std::vector<std::vector<double>> curves(resamples);

  const unsigned workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&](unsigned worker) {
    try {
      for (int b = static_cast<int>(worker); b < resamples; b += static_cast<int>(workers)) {
        Rng rng = Rng::child(seed, static_cast<std::uint64_t>(b));
        Dataset resampled = resample_with_replacement(dataset, rng);
        stat_values[b] = statistic(resampled);
        curves[b] = curve(resampled);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  BootstrapBands bands;
  bands.resamples = resamples;
  bands.seed = seed;
  bands.smece_ci = {percentile(stat_values, 0.025), percentile(stat_values, 0.975)};

  const std::size_t grid_points = curves[0].size();
  bands.mu_band.resize(grid_points);
  std::vector<double> column(resamples);
  for (std::size_t g = 0; g < grid_points; ++g) {
    for (int b = 0; b < resamples; ++b) column[b] = curves[b][g];
    bands.mu_band[g] = {percentile(column, 0.025), percentile(column, 0.975)};
  }
  return bands;
}

} // namespace detail

BootstrapBands bootstrap(const Dataset& dataset, int resamples, std::uint64_t seed, double eps) {
  const SmeceResult point = smece_fixed_point(dataset, eps);
  const double sigma_point = point.sigma_star;
  const std::size_t m = detail::diagram_grid_size(sigma_point, eps);

  return detail::bootstrap_with(
      dataset, resamples, seed,
      [eps](const Dataset& d) { return smece_fixed_point(d, eps).value; },
      [sigma_point, m](const Dataset& d) { return mu_hat_curve(d, sigma_point, m); });
}

DiagramData build_diagram(const Dataset& dataset, double eps) {
  const SmeceResult fixed_point = smece_fixed_point(dataset, eps);
  const std::size_t m = detail::diagram_grid_size(fixed_point.sigma_star, eps);
  const CurvePair curves = compute_curves(dataset, fixed_point.sigma_star, m);

  DiagramData data;
  data.grid = make_grid(m);
  data.mu_hat = curves.mu;
  data.delta_hat = curves.density;
  data.sigma_used = fixed_point.sigma_star;
  data.tilde_smece = tilde_from_curves(curves, m);
  data.smece_star = fixed_point.value;
  return data;
}

} // namespace calibsmooth
