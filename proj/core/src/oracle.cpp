#include "calibsmooth/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "calibsmooth/rng.hpp"

namespace calibsmooth::oracle {

namespace {

// All reflection copies of the sample predictions that can reach [0,1]
// through the kernel, flattened and sorted by position.
std::vector<std::pair<double, double>> reflected_centers(const Dataset& dataset,
                                                         double reach) {
  std::vector<std::pair<double, double>> centers;
  const int m_lo = static_cast<int>(std::floor(-reach)) - 1;
  const int m_hi = static_cast<int>(std::ceil(1.0 + reach));
  for (const Sample& s : dataset) {
    const double z = s.f - s.y;
    if (z == 0.0) continue;
    for (int m = m_lo; m <= m_hi; ++m) {
      const double c = (m % 2 == 0) ? m + s.f : m + 1 - s.f;
      if (c >= -reach && c <= 1.0 + reach) centers.emplace_back(c, z);
    }
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

} // namespace

double smece_direct(const Dataset& dataset, double sigma, int quadrature_points) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (quadrature_points < 2) throw std::invalid_argument("need at least 2 quadrature points");

  const double reach = 8.0 * sigma;
  const auto centers = reflected_centers(dataset, reach);
  if (centers.empty()) return 0.0;

  int intervals = quadrature_points;
  if (intervals % 2 != 0) ++intervals;
  const double h = 1.0 / static_cast<double>(intervals);
  const double norm = 1.0 / (std::sqrt(2.0 * M_PI) * sigma * static_cast<double>(dataset.size()));

  std::size_t win_lo = 0, win_hi = 0;
  double integral = 0.0;
  for (int k = 0; k <= intervals; ++k) {
    const double t = static_cast<double>(k) * h;
    while (win_lo < centers.size() && centers[win_lo].first < t - reach) ++win_lo;
    while (win_hi < centers.size() && centers[win_hi].first <= t + reach) ++win_hi;

    double field = 0.0;
    for (std::size_t i = win_lo; i < win_hi; ++i) {
      const double d = (t - centers[i].first) / sigma;
      field += centers[i].second * std::exp(-0.5 * d * d);
    }
    const double weight = (k == 0 || k == intervals) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    integral += weight * std::fabs(field * norm);
  }
  return integral * h / 3.0;
}

double wce_grid_search(const Dataset& dataset, double resolution) {
  if (!(resolution > 0.0 && resolution <= 0.01)) {
    throw std::invalid_argument("resolution must be in (0, 0.01]");
  }

  // Group residual mass by distinct prediction value.
  std::map<double, double> residual_by_f;
  for (const Sample& s : dataset) residual_by_f[s.f] += s.f - s.y;
  if (residual_by_f.size() > 6) {
    throw std::invalid_argument("wce_grid_search supports at most 6 distinct predictions");
  }

  const double n = static_cast<double>(dataset.size());
  std::vector<double> support, coeff;
  for (const auto& [f, z] : residual_by_f) {
    support.push_back(f);
    coeff.push_back(z / n);
  }

  const auto steps = static_cast<std::size_t>(std::ceil(2.0 / resolution - 1e-12));
  std::vector<double> values(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    values[k] = std::min(1.0, -1.0 + static_cast<double>(k) * resolution);
  }

  // Forward pass over the sorted support: adjacent Lipschitz constraints
  // imply all pairwise ones on a line. One grid step of slack keeps the
  // rounded true optimum feasible.
  std::vector<double> best(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) best[k] = coeff[0] * values[k];
  for (std::size_t j = 1; j < support.size(); ++j) {
    const double bound = support[j] - support[j - 1] + resolution;
    std::vector<double> next(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      double reachable = -1e300;
      for (std::size_t p = 0; p < values.size(); ++p) {
        if (std::fabs(values[p] - values[k]) <= bound && best[p] > reachable) {
          reachable = best[p];
        }
      }
      next[k] = coeff[j] * values[k] + reachable;
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

double ece_exact(const Dataset& dataset) {
  std::map<double, std::pair<double, double>> groups; // f -> (sum y, count)
  for (const Sample& s : dataset) {
    auto& g = groups[s.f];
    g.first += s.y;
    g.second += 1.0;
  }
  double total = 0.0;
  for (const auto& [f, g] : groups) {
    total += g.second * std::fabs(g.first / g.second - f);
  }
  return total / static_cast<double>(dataset.size());
}

namespace {

struct Atom {
  double f;
  double rate;
  double weight;
};

Dataset atoms_dataset(const std::vector<Atom>& atoms, std::uint64_t seed, std::size_t n) {
  std::vector<Sample> samples;
  samples.reserve(n);
  for (const Atom& atom : atoms) {
    const auto n_atom = static_cast<std::size_t>(std::llround(atom.weight * static_cast<double>(n)));
    const auto ones = static_cast<std::size_t>(std::llround(atom.rate * static_cast<double>(n_atom)));
    for (std::size_t i = 0; i < n_atom; ++i) {
      samples.push_back({atom.f, i < ones ? 1 : 0});
    }
  }
  Rng rng(seed);
  for (std::size_t i = samples.size(); i-- > 1;) {
    std::swap(samples[i], samples[static_cast<std::size_t>(rng.next_below(i + 1))]);
  }
  return Dataset(std::move(samples));
}

AnalyticInstance make_instance(std::string description, std::vector<Atom> atoms,
                               double wce) {
  AnalyticInstance instance;
  instance.description = std::move(description);
  instance.generate = [atoms = std::move(atoms)](std::uint64_t seed, std::size_t n) {
    return atoms_dataset(atoms, seed, n);
  };
  instance.wce_exact = wce;
  return instance;
}

} // namespace

const std::vector<AnalyticInstance>& analytic_instances() {
  // wCE = sup of sum_j c_j w(f_j) with c_j the mean residual mass at atom j,
  // over w bounded by 1 and Lipschitz across the support. For one atom this
  // is |c|; for two atoms with opposite signs the gap constraint binds.
  static const std::vector<AnalyticInstance> instances = {
      make_instance("single atom f=0.3, outcome rate 0.6", {{0.3, 0.6, 1.0}}, 0.3),
      make_instance("single atom f=0.8, outcome rate 0.5", {{0.8, 0.5, 1.0}}, 0.3),
      make_instance("single atom f=0.5, always 1", {{0.5, 1.0, 1.0}}, 0.5),
      make_instance("single atom f=0.9, outcome rate 0.2", {{0.9, 0.2, 1.0}}, 0.7),
      make_instance("single calibrated atom f=0.25", {{0.25, 0.25, 1.0}}, 0.0),
      make_instance("two swapped atoms 0.25/0.75",
                    {{0.25, 0.75, 0.5}, {0.75, 0.25, 0.5}}, 0.125),
      make_instance("miscalibrated atom next to calibrated atom",
                    {{0.2, 0.4, 0.5}, {0.6, 0.6, 0.5}}, 0.1),
      make_instance("three calibrated atoms",
                    {{0.2, 0.2, 1.0 / 3}, {0.5, 0.5, 1.0 / 3}, {0.8, 0.8, 1.0 / 3}}, 0.0),
      make_instance("two overconfident atoms, same sign",
                    {{0.3, 0.1, 0.5}, {0.7, 0.5, 0.5}}, 0.2),
      make_instance("wide swapped atoms 0.1/0.9",
                    {{0.1, 0.9, 0.5}, {0.9, 0.1, 0.5}}, 0.32),
  };
  return instances;
}

} // namespace calibsmooth::oracle
