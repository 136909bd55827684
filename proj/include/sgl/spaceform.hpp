#pragma once

#include <limits>

namespace sgl {

/// Simply connected model space of dimension n and constant curvature k.
struct Spaceform {
  int n = 2;
  double k = 0.0;
};

/// Curvature window [K_lower, k_upper] for a pinched ambient space.
struct CurvaturePair {
  double K_lower = 0.0;
  double k_upper = 0.0;
};

/// Volume of the Euclidean unit n-ball, omega_n = pi^(n/2) / Gamma(n/2+1),
/// by the two-step recurrence omega_n = 2 pi / n * omega_{n-2}.
double unit_ball_volume(int n);

/// Generalized sine: sin(sqrt(k) r)/sqrt(k), r, or sinh(sqrt(-k) r)/sqrt(-k)
/// for k > 0, k = 0, k < 0. Below |k| r^2 = 1e-8 a truncated series is used
/// so the k -> 0 seam is smooth to roundoff.
double sn(double k, double r);

/// d/dr of sn: cos, 1, or cosh in the scaled variable, same series seam.
double sn_prime(double k, double r);

/// Inverse of sn on the principal branch (r in [0, pi/(2 sqrt k)] for k > 0).
double sn_inverse(double k, double s);

/// Radius of the hemisphere-size ball, pi / (2 sqrt k) for k > 0, else +inf.
double hemisphere_radius(double k);

/// Total volume of the model space (finite only for k > 0).
double total_volume(const Spaceform& sf);

/// Volume of the geodesic r-ball: n omega_n * integral of sn^(n-1).
double ball_volume(const Spaceform& sf, double r);

/// Area of the geodesic r-sphere: n omega_n * sn(r)^(n-1).
double sphere_area(const Spaceform& sf, double r);

/// Inverse of ball_volume, bisection-seeded Newton, 1e-12 relative.
double radius_for_volume(const Spaceform& sf, double s);

/// Isoperimetric profile A(s) = sphere_area(radius_for_volume(s)).
double iso_profile(const Spaceform& sf, double s);

/// (sn_K(d) / sn_k(d))^(2n-2) for the curvature window at diameter d.
/// Requires K_lower <= k_upper, d > 0, and d < pi / sqrt(k_upper) when
/// k_upper > 0.
double curvature_constant(int n, const CurvaturePair& pair, double d);

}  // namespace sgl
