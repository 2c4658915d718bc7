#include <benchmark/benchmark.h>

#include "calibsmooth/calibsmooth.hpp"
#include "calibsmooth/rng.hpp"

namespace {

using namespace calibsmooth;

Dataset synthetic(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = rng.next_double();
    const double p = std::min(1.0, std::max(0.0, f * f * (3.0 - 2.0 * f))); // miscalibrated
    samples.push_back({f, rng.next_double() < p ? 1 : 0});
  }
  return Dataset(std::move(samples));
}

void BM_SmeceAtScale(benchmark::State& state) {
  const Dataset data = synthetic(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smece_at_scale(data, 0.1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SmeceAtScale)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity();

void BM_FixedPoint(benchmark::State& state) {
  const Dataset data = synthetic(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(smece_fixed_point(data).sigma_star);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FixedPoint)->RangeMultiplier(4)->Range(1 << 10, 1 << 20)->Complexity();

void BM_Convolve(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const Dataset data = synthetic(1 << 16, 7);
  ResidualHistogram hist = discretize(data, m);
  const double sigma = 1.0 / (1e-3 * static_cast<double>(m));
  const KernelConfig config(sigma, 1e-3);
  const DiscreteKernel kernel = build_discrete_kernel(config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(detail::convolve_wrapped(
        hist, kernel, config.wrap_depth, 0, static_cast<std::ptrdiff_t>(m) - 1));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();

void BM_BuildDiagram(benchmark::State& state) {
  const Dataset data = synthetic(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_diagram(data).smece_star);
  }
}
BENCHMARK(BM_BuildDiagram)->Arg(1 << 14)->Arg(1 << 17);

} // namespace

BENCHMARK_MAIN();
