#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace calibsmooth;
using testsupport::all_correct_dataset;
using testsupport::constant_dataset;
using testsupport::random_dataset;

TEST_CASE("smece_direct: exact cases") {
  CHECK(oracle::smece_direct(all_correct_dataset(3, 60), 0.1) == doctest::Approx(0.0));
  CHECK(oracle::smece_direct(constant_dataset(0.5, 0.0, 50), 0.1) ==
        doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("smece_direct agrees with the fast path on random data") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Dataset data = random_dataset(seed * 7 + 2, 50 + 30 * seed);
    for (double sigma : {0.02, 0.05, 0.1, 0.3}) {
      const double fast = smece_at_scale(data, sigma);
      const double slow = oracle::smece_direct(data, sigma);
      CHECK(std::fabs(fast - slow) <= 3e-3);
    }
  }
}

TEST_CASE("wce_grid_search: single support point takes the full residual") {
  const Dataset data = constant_dataset(0.3, 0.6, 100);
  CHECK(oracle::wce_grid_search(data, 0.01) == doctest::Approx(0.3).epsilon(0.011));
}

TEST_CASE("wce_grid_search: perfectly calibrated support gives zero") {
  std::vector<Sample> samples;
  for (int i = 0; i < 40; ++i) samples.push_back({0.25, i < 10 ? 1 : 0});
  for (int i = 0; i < 40; ++i) samples.push_back({0.75, i < 30 ? 1 : 0});
  const Dataset data(std::move(samples));
  CHECK(std::fabs(oracle::wce_grid_search(data, 0.01)) <= 0.021);
}

TEST_CASE("wce_grid_search: the Lipschitz coupling binds swapped atoms") {
  // Means +-0.5 at distance 0.5: sup 0.25*(w2 - w1) with |w2 - w1| <= 0.5,
  // attained at 0.125 (not 0.5, which would need a non-Lipschitz w).
  std::vector<Sample> samples;
  for (int i = 0; i < 100; ++i) samples.push_back({0.25, i < 75 ? 1 : 0});
  for (int i = 0; i < 100; ++i) samples.push_back({0.75, i < 25 ? 1 : 0});
  const Dataset data(std::move(samples));

  const double coarse = oracle::wce_grid_search(data, 0.01);
  const double fine = oracle::wce_grid_search(data, 0.002);
  CHECK(coarse == doctest::Approx(0.125).epsilon(0.15));
  CHECK(fine == doctest::Approx(0.125).epsilon(0.04));
}

TEST_CASE("wce_grid_search rejects wide supports") {
  std::vector<Sample> samples;
  for (int i = 0; i < 7; ++i) samples.push_back({0.1 + 0.1 * i, 0});
  const Dataset data(std::move(samples));
  CHECK_THROWS_AS(oracle::wce_grid_search(data), std::invalid_argument);
}

TEST_CASE("ece_exact: hand cases") {
  CHECK(oracle::ece_exact(all_correct_dataset(9, 30)) == doctest::Approx(0.0));
  CHECK(oracle::ece_exact(constant_dataset(0.5, 0.0, 10)) == doctest::Approx(0.5));
  CHECK(oracle::ece_exact(Dataset({{0.3, 0}, {0.3, 1}})) == doctest::Approx(0.2));
}

TEST_CASE("analytic instances match the enumeration oracle") {
  for (const auto& instance : oracle::analytic_instances()) {
    CAPTURE(instance.description);
    const Dataset data = instance.generate(11, 2000);
    const double enumerated = oracle::wce_grid_search(data, 0.005);
    // Enumeration is exact up to (support size) * resolution.
    CHECK(std::fabs(enumerated - instance.wce_exact) <= 6 * 0.005 + 1e-9);
    CHECK(instance.dce_lo() <= instance.dce_hi() + 1e-12);
  }
}

TEST_CASE("wCE is below smECE plus the displacement penalty") {
  for (const auto& instance : oracle::analytic_instances()) {
    const Dataset data = instance.generate(3, 1000);
    for (double sigma : {0.05, 0.2}) {
      const double smece = smece_at_scale(data, sigma);
      CHECK(instance.wce_exact <= smece + std::sqrt(2.0 / M_PI) * sigma + 0.04);
    }
  }
}

TEST_CASE("consistency sandwich on analytic instances (smoke)") {
  for (const auto& instance : oracle::analytic_instances()) {
    CAPTURE(instance.description);
    const Dataset data = instance.generate(21, 4000);
    const double smece_star = smece_fixed_point(data).value;
    CHECK(0.25 * instance.wce_exact <= smece_star + 0.03);
    CHECK(smece_star <= 2.0 * std::sqrt(instance.wce_exact) + 0.05);
  }
}
