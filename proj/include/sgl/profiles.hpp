#pragma once

#include <iosfwd>
#include <vector>

namespace sgl {

/// Sampled radial function: values[i] at grid[i], grid increasing with
/// grid[0] == 0. Interpolation between nodes is linear.
struct RadialProfile {
  std::vector<double> grid;
  std::vector<double> values;

  double eval(double r) const;
  double max_abs() const;
  void dump_csv(std::ostream& os) const;
};

/// Piecewise-constant radial function used by the rearrangement code:
/// value values[i] on the open-closed shell (radii[i-1], radii[i]]
/// (radii[-1] := 0) and 0 beyond radii.back() up to domain_radius.
/// Keeping the exact step structure lets shell integrals reproduce the
/// defining sums to roundoff instead of quadrature error.
struct StepProfile {
  std::vector<double> radii;
  std::vector<double> values;
  double domain_radius = 0.0;

  double eval(double r) const;
  double support_radius() const { return radii.empty() ? 0.0 : radii.back(); }
  RadialProfile sample(int points, double r_max = -1.0) const;
};

}  // namespace sgl
