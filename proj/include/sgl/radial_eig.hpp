#pragma once

#include <functional>

#include "sgl/profiles.hpp"
#include "sgl/spaceform.hpp"

namespace sgl {

struct ShootingOptions {
  int grid_points = 2049;        // output grid nodes (odd keeps Simpson exact)
  double ode_rtol = 1e-12;       // adaptive integrator relative tolerance
  double lambda_xtol = 1e-13;    // relative bracket width on the eigenvalue
  double h_max_fraction = 1.0 / 64.0;  // step cap as a fraction of R
};

/// First Dirichlet eigenvalues of the geodesic R-ball: lambda1 from the
/// radial mode, lambda2 from the first angular mode, with the ground state
/// z (z(0) = 1) and the radial factor J of the second eigenfunction
/// (J'(0) = 1), both with their derivatives on a shared uniform grid.
struct BallSpectrum {
  Spaceform sf;
  double R = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  RadialProfile z, z_prime;
  RadialProfile J, J_prime;
  double residual1 = 0.0;  // Rayleigh-quotient residuals of the profiles
  double residual2 = 0.0;
};

BallSpectrum ball_spectrum(const Spaceform& sf, double R,
                           const ShootingOptions& opts = {});

/// index-th eigenvalue (1-based) of the radial problem with angular mode 0
/// or 1. Used for lambda1 alone and for interlacing checks.
double ball_eigenvalue(const Spaceform& sf, double R, int mode, int index,
                       const ShootingOptions& opts = {});

double ball_lambda1(const Spaceform& sf, double R,
                    const ShootingOptions& opts = {});

/// Radius R with lambda1(B_R) equal to target, to 1e-10 relative. For
/// k > 0 the target must be >= n k, the hemisphere value.
double radius_for_lambda1(const Spaceform& sf, double target,
                          const ShootingOptions& opts = {});

/// h = J / z extended by its limit at R, and
/// F = h'^2 + (n-1) h^2 / sn^2, with monotonicity certification.
struct GapFactors {
  RadialProfile h, F;
  double h_limit = 0.0;       // h(R-)
  bool certified = false;     // h nondecreasing and F nonincreasing
  double h_violation = 0.0;   // worst relative monotonicity violations
  double F_violation = 0.0;
};

GapFactors h_and_F(const BallSpectrum& bs, double tol = 1e-7);

/// Rotationally symmetric surface with metric dr^2 + phi(r)^2 dtheta^2.
/// K_lower / k_upper declare the curvature window; they are verified
/// against -phi''/phi numerically before solving.
struct WarpedSurface {
  std::function<double(double)> phi;
  double R_max = 0.0;
  double K_lower = 0.0;
  double k_upper = 0.0;
};

struct WarpedSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int lambda2_mode = 1;          // Fourier mode attaining lambda2
  double lambda2_runner_up = 0.0;  // losing candidate, for interlacing checks
  RadialProfile u1;              // radial ground state, u1(0) = 1
  double residual = 0.0;         // worst discrete pencil residual
};

/// Dirichlet spectrum of the geodesic R-disk about the pole, one uniform
/// three-point pencil per Fourier mode, eigenvalues by Sturm-sequence
/// bisection with Richardson extrapolation from grids N/2 and N.
WarpedSpectrum warped_disk_spectrum(const WarpedSurface& ws, double R,
                                    int grid = 8192);

/// Single (mode, index) eigenvalue of the warped problem (1-based index).
double warped_mode_eigenvalue(const WarpedSurface& ws, double R, int mode,
                              int index, int grid = 8192);

namespace detail {
/// Worst defect of the adaptive integrator coefficient identities (stage row
/// sums against the nodes, weight sums, quadrature moments through the pair's
/// orders). Exposed so the test suite can pin it at machine epsilon.
double rk_tableau_defect();
}  // namespace detail

}  // namespace sgl
