#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "sgl/profiles.hpp"
#include "sgl/spaceform.hpp"

namespace sgl {

/// Weighted sample cloud (value, weight) of a nonnegative function on a
/// domain of the stated total measure. Slack measure (total minus the sum
/// of the weights) is the measure of the zero set; meshed domains use it to
/// extend a function by zero onto a larger region without resampling.
struct WeightedSamples {
  std::vector<std::pair<double, double>> pairs;  // (value >= 0, weight > 0)
  double total_measure = 0.0;

  double weight_sum() const;
  double slack() const;
  double max_value() const;
};

/// Exact distribution function mu(t) = measure{f > t} of a weighted sample
/// cloud, together with its right-continuous generalized inverse (the
/// decreasing rearrangement in measure coordinates). Zero-valued samples are
/// folded into the slack, so values() holds the distinct positive levels.
class DistributionFunction {
 public:
  explicit DistributionFunction(const WeightedSamples& ws);

  double mu(double t) const;
  double inverse(double s) const;

  /// Distinct positive values in decreasing order with cumulative measures;
  /// inverse(s) equals values()[j] exactly on [cumulative(j-1), cumulative(j)).
  const std::vector<double>& values() const { return v_; }
  const std::vector<double>& cumulative() const { return w_; }
  double total() const { return total_; }

 private:
  std::vector<double> v_, w_;
  double total_ = 0.0;
};

/// Decreasing rearrangement onto the model ball of volume total_measure:
/// level j occupies the shell between the volume-matched radii, exactly.
StepProfile decreasing_sym(const WeightedSamples& ws, const Spaceform& sf);

/// Increasing rearrangement: the slack (zero set) fills the core ball, then
/// the levels in ascending order. Needs total_measure to be meaningful.
StepProfile increasing_sym(const WeightedSamples& ws, const Spaceform& sf);

/// Conservation checks between a sample cloud and both rearrangements,
/// using exact shell volumes on the profile side.
struct NormReport {
  double lp_defect = 0.0;       // worst relative L^p mass defect over the list
  double sup_defect = 0.0;      // relative sup defect
  double support_defect = 0.0;  // relative defect of the support measure
};
NormReport check_norms(const WeightedSamples& ws, const Spaceform& sf,
                       const std::vector<double>& exponents);

/// Two-sided rearrangement inequality for a pair sampled on the same cells:
///   integral(S^ f)(S_ g) <= integral(f g) <= integral(S^ f)(S^ g).
struct HardyLittlewoodReport {
  double lower = 0.0, middle = 0.0, upper = 0.0;
  bool holds(double tol) const {
    const double scale = std::abs(upper) > 1.0 ? std::abs(upper) : 1.0;
    return lower <= middle + tol * scale && middle <= upper + tol * scale;
  }
};
HardyLittlewoodReport check_hardy_littlewood(const WeightedSamples& f,
                                             const WeightedSamples& g,
                                             const Spaceform& sf);

/// Commutation of rearrangement with monotone powers: S(f^beta) = (S f)^beta,
/// both directions, compared pointwise inside every shell.
struct PowerReport {
  double max_defect = 0.0;
  bool holds = false;
};
PowerReport check_powers(const WeightedSamples& ws, const Spaceform& sf,
                         double beta);

/// Exact rearrangement of a monotone radial profile from a rotationally
/// symmetric source (volume function m_D, radius source_R) onto the model
/// ball of the same total volume: value at rho is u(m_D^{-1}(m_N(rho))).
/// For decreasing u this is the decreasing rearrangement with no sampling
/// error; for increasing u, the increasing one.
RadialProfile radial_transfer(const RadialProfile& u,
                              const std::function<double(double)>& m_D,
                              double source_R, const Spaceform& sf,
                              int points = 1025);

}  // namespace sgl
