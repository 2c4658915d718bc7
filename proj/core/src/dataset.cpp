#include "calibsmooth/dataset.hpp"

#include <cmath>
#include <string>

#include "calibsmooth/errors.hpp"

namespace calibsmooth {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) {
    throw input_error("dataset is empty");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const Sample& s = samples_[i];
    if (!std::isfinite(s.f) || s.f < 0.0 || s.f > 1.0) {
      throw input_error("sample " + std::to_string(i + 1) + ": prediction " +
                        std::to_string(s.f) + " not in [0,1]");
    }
    if (s.y != 0 && s.y != 1) {
      throw input_error("sample " + std::to_string(i + 1) + ": outcome not in {0,1}");
    }
  }
}

double Dataset::mean_prediction() const {
  double sum = 0.0;
  for (const Sample& s : samples_) sum += s.f;
  return sum / static_cast<double>(samples_.size());
}

double Dataset::mean_outcome() const {
  double sum = 0.0;
  for (const Sample& s : samples_) sum += s.y;
  return sum / static_cast<double>(samples_.size());
}

double Dataset::mean_abs_residual() const {
  double sum = 0.0;
  for (const Sample& s : samples_) sum += std::fabs(s.f - s.y);
  return sum / static_cast<double>(samples_.size());
}

} // namespace calibsmooth
