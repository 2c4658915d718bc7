#pragma once

#include <cstddef>
#include <vector>

namespace calibsmooth {

// One binary observation: prediction f in [0,1] and outcome y in {0,1}.
struct Sample {
  double f;
  int y;
};

// The empirical distribution over (prediction, outcome) pairs. Immutable
// after construction; safe to share across threads.
class Dataset {
public:
  // Validates: non-empty, every f in [0,1] finite, every y in {0,1}.
  // Throws input_error naming the first offending sample.
  explicit Dataset(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

  double mean_prediction() const;
  double mean_outcome() const;
  // Mean absolute residual E|f - y|; upper bounds smECE at every scale.
  double mean_abs_residual() const;

private:
  std::vector<Sample> samples_;
};

} // namespace calibsmooth
