#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "calibsmooth/dataset.hpp"
#include "calibsmooth/smece.hpp"

namespace calibsmooth {

// A strictly increasing map h carrying predictions into a subinterval of R,
// where the smoothing happens. Predictions are clipped to
// [clamp, 1-clamp] first when h diverges at the endpoints (logit).
class TransformSpec {
public:
  enum class Kind { identity, logit, custom };

  static TransformSpec identity();
  static TransformSpec logit(double clamp = 1e-4);
  // Throws config_error unless fwd is strictly increasing on the clamped
  // range (probed on a grid) and inv round-trips within 1e-9.
  static TransformSpec custom(std::function<double(double)> fwd,
                              std::function<double(double)> inv, double clamp);

  Kind kind() const { return kind_; }
  double clamp() const { return clamp_; }
  const std::string& name() const { return name_; }

  double clip(double f) const;
  double forward(double f) const { return fwd_(f); }    // expects clipped input
  double inverse(double u) const { return inv_(u); }

  double range_lo() const { return fwd_(clamp_); }
  double range_hi() const { return fwd_(1.0 - clamp_); }

private:
  TransformSpec(Kind kind, std::string name, std::function<double(double)> fwd,
                std::function<double(double)> inv, double clamp);
  void validate() const;

  Kind kind_;
  std::string name_;
  std::function<double(double)> fwd_;
  std::function<double(double)> inv_;
  double clamp_;
};

// smECE with the smoothing applied in the image of h: residuals (f - y)
// are binned at positions h(f) on a uniform grid over the clamped range and
// convolved with a plain (non-reflected) Gaussian of scale sigma (h-units).
double smece_h_at_scale(const Dataset& dataset, const TransformSpec& transform,
                        double sigma, double eps = kDefaultEps);

// Fixed point of sigma -> smECE_{sigma,h}, binary search over
// (0, range_hi - range_lo].
SmeceResult smece_h_fixed_point(const Dataset& dataset, const TransformSpec& transform,
                                double eps = kDefaultEps);

struct RecalibrationResult {
  Dataset mapped;            // (kappa(f_i), y_i)
  double mean_displacement;  // empirical E |h(kappa(f)) - h(f)|
  double sigma_star;         // noise scale used (h-units)
};

// Two-stage calibrating post-processing: add Gaussian noise of scale
// sigma* in h-space (projected back into range), then replace each noisy
// prediction with the kernel-regression estimate of y at that point.
// Seeded and deterministic.
RecalibrationResult recalibrate(const Dataset& dataset, const TransformSpec& transform,
                                double eps, std::uint64_t seed);

namespace detail {

// Regression and density curves evaluated on a uniform grid in h-space
// (plain Gaussian smoothing); used for the transformed-metric diagram.
struct HCurves {
  std::vector<double> grid_h;   // h-units
  std::vector<double> mu;       // E[y | h(f) ~ t]
  std::vector<double> density;  // normalized in h-units
};

HCurves h_curves(const Dataset& dataset, const TransformSpec& transform, double sigma,
                 double eps, std::size_t cell_cap);

} // namespace detail

} // namespace calibsmooth
