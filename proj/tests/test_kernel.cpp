#include <doctest.h>

#include <cmath>

#include "test_support.hpp"

using namespace calibsmooth;
using testsupport::simpson;

TEST_CASE("pi_reflect matches the closed form") {
  CHECK(pi_reflect(0.5) == doctest::Approx(0.5));
  CHECK(pi_reflect(1.2) == doctest::Approx(0.8));
  CHECK(pi_reflect(-0.3) == doctest::Approx(0.3));
  CHECK(pi_reflect(0.0) == doctest::Approx(0.0));
  CHECK(pi_reflect(1.0) == doctest::Approx(1.0));
  CHECK(pi_reflect(2.0) == doctest::Approx(0.0));
  CHECK(pi_reflect(-1.7) == doctest::Approx(0.3));
}

TEST_CASE("pi_reflect is idempotent on [0,1] and 1-Lipschitz") {
  Rng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.next_double();
    CHECK(pi_reflect(x) == doctest::Approx(x));

    const double a = -10.0 + 20.0 * rng.next_double();
    const double b = -10.0 + 20.0 * rng.next_double();
    CHECK(std::fabs(pi_reflect(a) - pi_reflect(b)) <= std::fabs(a - b) + 1e-12);
  }
}

TEST_CASE("pi_reflect rejects non-finite input") {
  CHECK_THROWS_AS(pi_reflect(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(pi_reflect(std::nan("")), std::invalid_argument);
}

TEST_CASE("reflected kernel weight: symmetry and center value") {
  CHECK(reflected_kernel_weight(0.2, 0.7, 0.15) ==
        doctest::Approx(reflected_kernel_weight(0.7, 0.2, 0.15)).epsilon(1e-12));
  // phi_{0.1}(0) = 1/(sqrt(2 pi) * 0.1); reflection terms are < 1e-40 here.
  CHECK(reflected_kernel_weight(0.5, 0.5, 0.1) == doctest::Approx(3.98942).epsilon(1e-5));

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.next_double();
    const double y = rng.next_double();
    CHECK(reflected_kernel_weight(x, y, 0.07) ==
          doctest::Approx(reflected_kernel_weight(y, x, 0.07)).epsilon(1e-12));
  }
}

TEST_CASE("reflected kernel integrates to one in either argument") {
  for (double t0 : {0.0, 0.25, 0.5, 1.0}) {
    for (double sigma : {0.05, 0.1, 0.3}) {
      const double integral = simpson(
          [&](double t) { return reflected_kernel_weight(t, t0, sigma); }, 0.0, 1.0, 4000);
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("mean absolute displacement is at most sqrt(2/pi)*sigma") {
  const double bound_factor = std::sqrt(2.0 / M_PI);
  for (double t0 : {0.0, 0.25, 0.5, 1.0}) {
    for (double sigma : {0.05, 0.1, 0.3}) {
      const double displacement = simpson(
          [&](double t) { return std::fabs(t - t0) * reflected_kernel_weight(t, t0, sigma); },
          0.0, 1.0, 4000);
      CHECK(displacement <= bound_factor * sigma + 1e-6);
    }
  }
}

TEST_CASE("reflected kernel rejects bad arguments") {
  CHECK_THROWS_AS(reflected_kernel_weight(0.5, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(reflected_kernel_weight(0.5, 0.5, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(reflected_kernel_weight(1.5, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("kernel config pins the grid") {
  const KernelConfig config(0.1, 1e-3);
  CHECK(config.grid_size() == 10000);
  CHECK(config.wrap_depth == 3); // ceil(sqrt(log 2000))
  CHECK(KernelConfig::default_wrap_depth(0.1) >= 1);

  CHECK_THROWS_AS(KernelConfig(0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(KernelConfig(-0.5, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(KernelConfig(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(KernelConfig(0.5, 0.5), std::invalid_argument);
  // sigma below eps^2 is rejected before the grid blows up.
  CHECK_THROWS_AS(KernelConfig(1e-8, 1e-3), std::invalid_argument);
}

TEST_CASE("grid overflow raises a resource error") {
  CHECK_THROWS_AS(KernelConfig(2e-4, 1e-3), resource_limit_error);
}

TEST_CASE("discrete kernel: normalized, unimodal, symmetric") {
  const KernelConfig config(0.5, 0.1);
  const DiscreteKernel kernel = build_discrete_kernel(config);

  double sum = 0.0;
  for (double w : kernel.weights) {
    CHECK(w > 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  const auto center = static_cast<std::size_t>(kernel.radius);
  for (std::size_t i = 0; i < kernel.weights.size(); ++i) {
    CHECK(kernel.weights[i] <= kernel.weights[center]);
    CHECK(kernel.weights[i] ==
          doctest::Approx(kernel.weights[kernel.weights.size() - 1 - i]).epsilon(1e-12));
  }
}

TEST_CASE("discrete kernel tail mass is below eps^2") {
  for (double sigma : {0.02, 0.1, 0.5}) {
    const KernelConfig config(sigma, 1e-3);
    const DiscreteKernel kernel = build_discrete_kernel(config);
    // The kept support spans 8 sigma on both sides; compare the mass the
    // sampled Gaussian would have beyond the cut.
    const double sigma_cells = sigma * static_cast<double>(config.grid_size());
    double kept = 0.0, tail = 0.0;
    for (std::ptrdiff_t d = -4 * kernel.radius; d <= 4 * kernel.radius; ++d) {
      const double x = static_cast<double>(d) / sigma_cells;
      const double w = std::exp(-0.5 * x * x);
      if (d >= -kernel.radius && d <= kernel.radius) {
        kept += w;
      } else {
        tail += w;
      }
    }
    CHECK(tail / (kept + tail) < 1e-3 * 1e-3);
  }
}

TEST_CASE("the uniform measure is invariant under wrapped convolution") {
  // A uniform density puts half a cell of mass in each boundary bucket;
  // with the reflection fold those carry double weight, so the wrapped
  // signal is exactly flat and convolution returns it unchanged.
  const KernelConfig config(0.1, 1e-2);
  const DiscreteKernel kernel = build_discrete_kernel(config);
  ResidualHistogram hist;
  hist.buckets.assign(config.grid_size() + 1, 0.7);
  hist.buckets.front() = 0.35;
  hist.buckets.back() = 0.35;
  hist.count = 1;

  const auto out = detail::convolve_wrapped(hist, kernel, config.wrap_depth, 0,
                                            static_cast<std::ptrdiff_t>(config.grid_size()));
  for (double v : out) CHECK(v == doctest::Approx(0.7).epsilon(1e-9));
}
