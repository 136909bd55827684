#pragma once

// End-to-end evaluation of the curvature-weighted eigenvalue-gap bound:
// balancing-point construction for the radial test functions, the weighted
// middle inequalities linking the domain to the comparison ball, and the
// final report  gap <= (sphere-area ratio)^2 * (comparison-ball gap).

#include <string>
#include <vector>

#include "sgl/comparison.hpp"
#include "sgl/fem_eig.hpp"
#include "sgl/mesh_domain.hpp"
#include "sgl/radial_eig.hpp"
#include "sgl/spaceform.hpp"

namespace sgl {

/// Test field P_p(x) = (exp_p^{-1}(x) / r_p(x)) * h(sigma(r_p(x))) evaluated
/// at every mesh vertex, expressed in the fixed orthonormal frame at p used
/// by log_map. h is extended by constancy beyond its grid; h(0) = 0 makes
/// the field vanish at p.
std::vector<Vec2> test_field(const MeshDomain& mesh, Vec2 p,
                             const SigmaProfile& sigma,
                             const RadialProfile& h);

struct BalanceOptions {
  double tol = 1e-8;          // target |X(p)| / integral u1^2
  int max_iterations = 500;   // damped-step cap
  int sigma_grid = 513;       // radial resolution of each sigma profile
  double memo_step = 1e-4;    // reuse sigma when p moves less than this
};

struct BalancePoint {
  Vec2 p;                     // in the mesh chart
  double residual = 0.0;      // |X(p)| / integral u1^2 at convergence
  int iterations = 0;
  std::vector<double> trace;  // residual after each accepted step
};

/// Damped fixed-point iteration p <- exp_p(tau X(p) / integral u1^2) for the
/// balance condition X(p) = integral_Omega P_p u1^2 = 0. Steps that leave
/// the hull are projected back (convexity keeps the flow inward); tau halves
/// whenever the residual fails to decrease. sigma is recomputed at each new
/// p against the target spaceform, memoized under small moves. u1 holds
/// per-vertex values on the mesh. Throws std::runtime_error with the
/// residual trace if the iteration cap is exceeded.
BalancePoint balance_point(const MeshDomain& mesh, const MeshDomain& hull,
                           const std::vector<double>& u1,
                           const RadialProfile& h, const Spaceform& target,
                           const BalanceOptions& opts = {});

/// One run of the balancing estimate at a fixed p, plus the symmetrized
/// chain that transports both sides onto the comparison ball.
struct MiddleReport {
  double lhs = 0.0;           // (lambda2 - lambda1) integral u1^2 h(sigma)^2
  double rhs = 0.0;           // C1^2 integral u1^2 F(sigma)
  bool holds = false;

  double omega_h = 0.0;       // integral_Omega u1^2 h(sigma(r_p))^2
  double ball_h = 0.0;        // integral_B    z^2  h(r)^2
  double omega_F = 0.0;       // integral_Omega u1^2 F(sigma(r_p))
  double ball_F = 0.0;        // integral_B    z^2  F(r)
  bool chain_certified = false;  // h increasing / F decreasing certified
  bool chain_holds = false;      // omega_h >= ball_h and omega_F <= ball_F

  double rayleigh_lhs = 0.0;  // integral u1^2 (g'^2 + g^2/sn_k(r)^2), g = h o sigma
  bool rayleigh_holds = false;
};

/// gap is lambda2 - lambda1 of the domain; p must satisfy the balance
/// condition (orthogonality is what makes the min-max step valid). The
/// chain and the exact-gradient Rayleigh check are evaluated only when the
/// factor monotonicity is certified.
MiddleReport middle_inequality(const MeshDomain& mesh,
                               const std::vector<double>& u1, double gap,
                               Vec2 p, const SigmaProfile& sigma,
                               const GapFactors& factors,
                               const BallSpectrum& ball, double c1,
                               double rel_tol = 1e-6);

struct GapTolerances {
  double verdict_margin = 0.01;  // relative slack allowed on gap <= bound
  BalanceOptions balance;
  ShootingOptions shooting;
};

/// Final report; the CSV row layout follows the field order exactly.
struct GapBoundReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double alpha = 1.0;
  double ball_radius = 0.0;
  double ball_gap = 0.0;
  double C1 = 0.0;
  double curvature_const = 0.0;
  double bound_rhs = 0.0;
  std::string verdict;  // "holds" or "violated"
  double relative_slack = 0.0;  // (bound_rhs - gap) / bound_rhs
  double diameter = 0.0;
  double K_lower = 0.0;
  double k_upper = 0.0;
};

/// Full pipeline on a meshed domain: FEM eigenpair, weak Faber-Krahn
/// eligibility for alpha, convex hull (hemisphere conditions when k > 0),
/// comparison ball, balancing point, distortion constant, and the final
/// verdict with the curvature window `pair`. The window must contain the
/// chart curvature (K_lower <= k <= k_upper); the comparison geometry is
/// N(k_upper). Throws std::domain_error on eligibility failures.
GapBoundReport evaluate_bound(const MeshDomain& mesh, double alpha,
                              const CurvaturePair& pair,
                              const GapTolerances& tol = {});

/// Spaceform ambient shortcut: curvature window collapsed to the chart
/// curvature, where the window witness is automatic.
GapBoundReport evaluate_bound(const MeshDomain& mesh, double alpha,
                              const GapTolerances& tol = {});

/// Rotationally symmetric variable-curvature surface: spectrum from the
/// Fourier-mode pencils, sigma from the radial volume transfer, balance
/// point at the pole (the field vanishes there by parity), comparison
/// geometry N(ws.k_upper), diameter 2R.
GapBoundReport evaluate_bound(const WarpedSurface& ws, double R, double alpha,
                              const GapTolerances& tol = {});

/// Radial-only sharpness report for a geodesic ball about its center in
/// N(k), any dimension: sigma is the identity (so C1 = 1 exactly) and both
/// sides of the bound come from the shooting solver.
GapBoundReport ball_sharpness_report(const Spaceform& sf, double R,
                                     const GapTolerances& tol = {});

struct HadamardReport {
  double ratio = 0.0;        // lambda2 / lambda1 of the domain
  double ratio_bound = 0.0;  // 1 + alpha^-2 curvature_const (mu2/mu1 - 1)
  bool holds = false;
};

/// Flat-comparison corollary (k_upper = 0): lambda2/lambda1 - 1 is at most
/// alpha^-2 (sn_K(d)/d)^(2n-2) times the flat unit-ball excess mu2/mu1 - 1.
/// Throws std::domain_error when the report's k_upper is not 0.
HadamardReport hadamard_ratio(const GapBoundReport& report, int n = 2,
                              double rel_tol = 0.01);

/// Flat unit-ball eigenvalue ratio mu2/mu1 in dimension n (the extremal
/// value of the flat corollary), from the radial solver, cached.
double flat_ball_ratio(int n);

/// One CSV row per report, %.12g numbers, columns in field order.
std::string report_csv_header();
std::string report_csv_row(const GapBoundReport& report);
/// JSON object with identical field names.
std::string report_json(const GapBoundReport& report);

}  // namespace sgl
