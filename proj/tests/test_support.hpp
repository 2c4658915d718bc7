#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "calibsmooth/calibsmooth.hpp"
#include "calibsmooth/rng.hpp"

namespace testsupport {

using calibsmooth::Dataset;
using calibsmooth::Sample;

// f ~ U(0,1), y ~ Bernoulli(mu(f)) with a seeded smooth perturbation of the
// diagonal; the family spans near-calibrated through clearly miscalibrated.
Dataset random_dataset(std::uint64_t seed, std::size_t n);

// Same conditional law for every seed: mu(f) = clamp(f + 0.15 sin(2 pi f)).
Dataset wavy_dataset(std::uint64_t seed, std::size_t n);

// All predictions equal, outcomes drawn to an exact count.
Dataset constant_dataset(double f, double outcome_rate, std::size_t n);

// Perfectly confident and correct: f = y in {0,1}.
Dataset all_correct_dataset(std::uint64_t seed, std::size_t n);

// The two-sample perfectly cancelling pair {(0.5,0),(0.5,1)} repeated.
Dataset balanced_half_dataset(std::size_t n_pairs);

// Composite Simpson quadrature.
double simpson(const std::function<double(double)>& f, double a, double b, int intervals);

// Runs a command, captures exit code; stdout/stderr routed to /dev/null.
int run_command(const std::string& command);

std::string read_file_text(const std::string& path);
void write_file_text(const std::string& path, const std::string& content);

// Unique-ish scratch path under the build tree.
std::string temp_path(const std::string& name);

} // namespace testsupport
