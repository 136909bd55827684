#pragma once

// Triangulated 2-D domains in model-space charts: file I/O, metric areas,
// diameters, geodesic convex hulls, the volume-transfer function sigma, and
// the distortion constant C1 = max(sigma', sn_k(sigma)/sn_k(r)).

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sgl/charts.hpp"
#include "sgl/numerics.hpp"
#include "sgl/spaceform.hpp"

namespace sgl {

struct MeshDomain {
  Chart chart = Chart::flat;
  double k = 0.0;
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary;  // ordered boundary vertex indices (ccw)
};

// SGLMESH text format; parse errors carry 1-based line numbers.
MeshDomain load_mesh(const std::string& path);
void save_mesh(const MeshDomain& mesh, const std::string& path);
MeshDomain parse_mesh(std::istream& in, const std::string& origin);

// Structural checks: chart/curvature compatibility, in-domain vertices,
// index ranges, consistent positive orientation, non-degenerate triangles.
void validate_mesh(const MeshDomain& mesh);

double chart_triangle_area(const MeshDomain& mesh, int t);   // signed
double metric_triangle_area(const MeshDomain& mesh, int t);  // quadrature
double domain_volume(const MeshDomain& mesh);

// Max pairwise geodesic distance over the boundary vertices (all vertices
// when no boundary is recorded).
double diameter(const MeshDomain& mesh);

bool point_in_mesh(const MeshDomain& mesh, Vec2 q);

// Geodesic convex hull: vertices are moved to the geodesic-affine chart,
// where geodesics are straight, and the Euclidean hull is taken there. The
// result is a fan-triangulated convex polygon in the affine chart. For
// k > 0 the hemisphere eligibility conditions are enforced: every vertex in
// the open hemisphere, hull diameter < min(pi/(2 sqrt k), inj_radius), and
// hull area below half the total sphere area.
MeshDomain convex_hull_region(const MeshDomain& mesh,
                              double inj_radius = 1e300);

// Convex membership / Euclidean projection in the hull's own chart.
bool hull_contains(const MeshDomain& hull, Vec2 q, double tol = 1e-12);
Vec2 project_to_hull(const MeshDomain& hull, Vec2 q);

struct SigmaProfile {
  std::vector<double> grid;    // radii r in [0, r_max]
  std::vector<double> sigma;   // sigma(r)
  std::vector<double> dsigma;  // sigma'(r)
  double r_max = 0.0;
  bool exact_slopes = false;  // dsigma from a closed form, not the spline
  num::Pchip spline;          // monotone interpolant of sigma over grid

  double eval(double r) const;   // clamped to [0, r_max]
  double deriv(double r) const;  // 0 beyond r_max
};

// sigma(r) = radius in N(target.k) of the ball matching |B_r(p) ∩ hull|_M.
// Exact per-radius evaluation: the hull is Moebius-recentered so p is the
// chart origin, making geodesic balls concentric Euclidean disks in the
// affine chart; the weighted clipped area reduces to closed-form radial
// primitives integrated edge-by-edge.
SigmaProfile sigma_profile(const MeshDomain& hull, Vec2 p,
                           const Spaceform& target, int grid_points = 513);

// Radial variant for warped-product surfaces: |B_r| = 2 pi * integral of
// phi, sigma' = phi(r)/sn_k(sigma(r)) exactly.
SigmaProfile sigma_profile_radial(const std::function<double(double)>& phi,
                                  double R, const Spaceform& target,
                                  int grid_points = 1025);

// max over [r_lo, r_hi] of max(sigma'(r), sn_k(sigma(r))/sn_k(r)), with the
// r -> 0 limit handled by sigma'(0).
double c1_constant(const SigmaProfile& sigma, const Spaceform& target,
                   double r_lo, double r_hi);

// Range of geodesic distances from p attained on the meshed domain:
// [0, max] when p lies inside the mesh, else [min over boundary, max].
std::pair<double, double> radius_range(const MeshDomain& mesh, Vec2 p);

}  // namespace sgl
