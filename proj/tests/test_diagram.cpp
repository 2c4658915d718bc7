#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"

using namespace calibsmooth;
using testsupport::all_correct_dataset;
using testsupport::balanced_half_dataset;
using testsupport::constant_dataset;
using testsupport::random_dataset;
using testsupport::wavy_dataset;

TEST_CASE("mu_hat: single outcome pins the whole curve") {
  const Dataset data({{0.5, 1}});
  for (double v : mu_hat_curve(data, 0.1, 500)) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("mu_hat: symmetric pair crosses one half in the middle") {
  const Dataset data({{0.2, 0}, {0.8, 1}});
  const std::size_t m = 1000;
  const auto mu = mu_hat_curve(data, 0.2, m);
  CHECK(mu[m / 2] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("mu_hat stays inside [0,1]") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dataset data = random_dataset(seed + 31, 120);
    for (double sigma : {0.02, 0.15}) {
      for (double v : mu_hat_curve(data, sigma, 2000)) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
}

TEST_CASE("delta_hat: evenly spread predictions give a flat density") {
  std::vector<Sample> samples;
  const std::size_t n = 50000;
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back({static_cast<double>(i) / static_cast<double>(n - 1), 0});
  }
  const Dataset data(std::move(samples));
  const auto density = delta_hat_curve(data, 0.05, 4000);
  for (double v : density) CHECK(v == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("delta_hat: point mass gives a symmetric peak at the atom") {
  const Dataset data = constant_dataset(0.5, 0.0, 100);
  const std::size_t m = 2000;
  const auto density = delta_hat_curve(data, 0.1, m);
  const std::size_t peak =
      std::max_element(density.begin(), density.end()) - density.begin();
  CHECK(peak == m / 2);
  for (std::size_t d = 0; d <= m / 2; ++d) {
    CHECK(density[m / 2 - d] == doctest::Approx(density[m / 2 + d]).epsilon(1e-9));
  }
}

TEST_CASE("delta_hat trapezoid-integrates to one") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dataset data = random_dataset(seed + 3, 200);
    for (double sigma : {0.03, 0.2}) {
      const std::size_t m = 3000;
      const auto density = delta_hat_curve(data, sigma, m);
      double integral = 0.0;
      for (std::size_t b = 0; b < m; ++b) integral += 0.5 * (density[b] + density[b + 1]);
      integral /= static_cast<double>(m);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
      for (double v : density) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("tilde_smece: balanced point mass scales like 0.8 sigma") {
  const Dataset data = balanced_half_dataset(5000);
  const double sigma = 0.05;
  const double tilde = tilde_smece(data, sigma);
  CHECK(tilde / sigma > 0.7);
  CHECK(tilde / sigma < 0.9);
  // smECE is exactly zero here; the gap is the sqrt(2/pi)*sigma allowance.
  CHECK(std::fabs(tilde - smece_at_scale(data, sigma)) <= 0.8 * sigma + 5e-3);
}

TEST_CASE("tilde_smece stays near smece_at_scale") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Dataset data = random_dataset(seed + 51, 400);
    for (double sigma : {0.02, 0.1, 0.3}) {
      const double gap = std::fabs(tilde_smece(data, sigma) - smece_at_scale(data, sigma));
      CHECK(gap <= std::sqrt(2.0 / M_PI) * sigma + 5e-3);
    }
  }
}

TEST_CASE("tilde_smece: all-correct boundary atoms stay under the 0.8 sigma bound") {
  std::vector<Sample> samples(300, Sample{0.0, 0});
  const Dataset data(std::move(samples));
  for (double sigma : {0.05, 0.1}) {
    CHECK(tilde_smece(data, sigma) <= 0.8 * sigma + 5e-3);
  }
}

TEST_CASE("binned_ece hand cases") {
  {
    const Dataset data = random_dataset(8, 300);
    CHECK(binned_ece(data, 1) ==
          doctest::Approx(std::fabs(data.mean_outcome() - data.mean_prediction())).epsilon(1e-12));
  }
  {
    const Dataset data({{0.3, 0}, {0.7, 1}});
    CHECK(binned_ece(data, 2) == doctest::Approx(0.3).epsilon(1e-12));
  }
  {
    // Calibrated within each bin.
    std::vector<Sample> samples;
    for (int i = 0; i < 10; ++i) samples.push_back({0.2, i < 2 ? 1 : 0});
    for (int i = 0; i < 10; ++i) samples.push_back({0.8, i < 8 ? 1 : 0});
    CHECK(binned_ece(Dataset(std::move(samples)), 2) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("select_bins_cv: singleton candidate and determinism") {
  const Dataset data = random_dataset(13, 500);
  CHECK(select_bins_cv(data, {1}, 5, 9) == 1);
  const int a = select_bins_cv(data, {5, 10, 20}, 5, 9);
  const int b = select_bins_cv(data, {5, 10, 20}, 5, 9);
  CHECK(a == b);
  CHECK_THROWS_AS(select_bins_cv(data, {}, 5, 9), std::invalid_argument);
}

TEST_CASE("select_bins_cv picks two bins for a step function") {
  // mu jumps at 0.5; 1 bin underfits, 50 bins overfit.
  Rng rng(99);
  std::vector<Sample> samples;
  for (int i = 0; i < 10000; ++i) {
    const double f = rng.next_double();
    const double mu = f < 0.5 ? 0.25 : 0.75;
    samples.push_back({f, rng.next_double() < mu ? 1 : 0});
  }
  const Dataset data(std::move(samples));
  CHECK(select_bins_cv(data, {1, 2, 50}, 5, 4) == 2);
}

TEST_CASE("bootstrap: deterministic, ordered, zero-width for a point mass") {
  const Dataset data = random_dataset(61, 150);
  const BootstrapBands a = bootstrap(data, 2, 7);
  const BootstrapBands b = bootstrap(data, 2, 7);
  CHECK(a.smece_ci.first == b.smece_ci.first);
  CHECK(a.smece_ci.second == b.smece_ci.second);
  REQUIRE(a.mu_band.size() == b.mu_band.size());
  for (std::size_t i = 0; i < a.mu_band.size(); ++i) {
    CHECK(a.mu_band[i].first == b.mu_band[i].first);
    CHECK(a.mu_band[i].second == b.mu_band[i].second);
    CHECK(a.mu_band[i].first <= a.mu_band[i].second);
  }
  CHECK(a.smece_ci.first <= a.smece_ci.second);

  const Dataset identical = constant_dataset(0.4, 0.0, 80);
  const BootstrapBands c = bootstrap(identical, 8, 3);
  CHECK(c.smece_ci.first == doctest::Approx(c.smece_ci.second).epsilon(1e-12));
  for (const auto& [lo, hi] : c.mu_band) CHECK(lo == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("bootstrap: CI width shrinks with sample size (median over seeds)") {
  std::vector<double> widths_small, widths_large;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset small = wavy_dataset(seed + 201, 2000);
    const Dataset large = wavy_dataset(seed + 201, 8000);
    const auto a = bootstrap(small, 40, seed);
    const auto b = bootstrap(large, 40, seed);
    widths_small.push_back(a.smece_ci.second - a.smece_ci.first);
    widths_large.push_back(b.smece_ci.second - b.smece_ci.first);
  }
  std::sort(widths_small.begin(), widths_small.end());
  std::sort(widths_large.begin(), widths_large.end());
  CHECK(widths_large[2] < widths_small[2]);
}

TEST_CASE("build_diagram ties everything to sigma*") {
  {
    const DiagramData d = build_diagram(all_correct_dataset(19, 400));
    CHECK(d.smece_star <= 1e-3);
    CHECK(d.mu_hat.front() <= 0.05);
    CHECK(d.mu_hat.back() >= 0.95);
  }
  {
    const DiagramData d = build_diagram(constant_dataset(0.5, 0.0, 500));
    CHECK(d.sigma_used == doctest::Approx(0.5).epsilon(2e-3));
    for (double v : d.mu_hat) CHECK(v == doctest::Approx(0.0));
    CHECK(std::fabs(d.tilde_smece - d.smece_star) <= 0.8 * d.sigma_used + 5e-3);
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const DiagramData d = build_diagram(random_dataset(seed + 71, 500));
    CHECK(std::fabs(d.tilde_smece - d.smece_star) <= 0.8 * d.sigma_used + 5e-3);
    CHECK(d.grid.size() == d.mu_hat.size());
    CHECK(d.grid.size() == d.delta_hat.size());
  }
}

TEST_CASE("build_diagram is deterministic") {
  const Dataset data = random_dataset(88, 300);
  const DiagramData a = build_diagram(data);
  const DiagramData b = build_diagram(data);
  CHECK(a.sigma_used == b.sigma_used);
  CHECK(a.smece_star == b.smece_star);
  CHECK(a.tilde_smece == b.tilde_smece);
  REQUIRE(a.mu_hat.size() == b.mu_hat.size());
  for (std::size_t i = 0; i < a.mu_hat.size(); ++i) {
    CHECK(a.mu_hat[i] == b.mu_hat[i]);
    CHECK(a.delta_hat[i] == b.delta_hat[i]);
  }
}
