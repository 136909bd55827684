#pragma once

#include <Eigen/SparseCore>
#include <array>
#include <vector>

#include "sgl/mesh_domain.hpp"
#include "sgl/symmetrize.hpp"

namespace sgl {

/// Two smallest Dirichlet eigenpairs of a meshed domain. u1 is the ground
/// state per vertex (zero on boundary vertices), sign-fixed positive and
/// scaled so its largest entry is 1; mass_norm is sqrt(u1^T M u1) for that
/// scaling. lambda3 is the next Ritz value, kept for the degeneracy flag.
struct EigenResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda3 = 0.0;
  std::vector<double> u1;
  double mass_norm = 0.0;
  double residual1 = 0.0;  // ||K u - lambda M u|| / (lambda ||M u||)
  double residual2 = 0.0;
  double ortho_defect = 0.0;       // |<u1, u2>_M| after normalization
  bool degenerate_second = false;  // lambda3 - lambda2 < 1e-6 * lambda2
};

/// P1 operators restricted to the interior vertices (Dirichlet rows and
/// columns eliminated). In two dimensions the Dirichlet energy is
/// conformally invariant, so the stiffness matrix is the flat-chart one;
/// the metric enters only through the mass density.
struct AssembledSystem {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
  std::vector<int> interior;  // ascending vertex ids of the matrix rows
  int total_vertices = 0;
};

/// Exact flat P1 element stiffness of the chart triangle (a, b, c).
std::array<std::array<double, 3>, 3> element_stiffness(Vec2 a, Vec2 b,
                                                       Vec2 c);

/// P1 element mass with the metric area density sampled by the three-point
/// edge-midpoint rule (exact for a flat chart, where the density is 1).
std::array<std::array<double, 3>, 3> element_mass(Chart chart, double k,
                                                  Vec2 a, Vec2 b, Vec2 c);

AssembledSystem assemble(const MeshDomain& mesh);

/// Two smallest eigenpairs of the (stiffness, mass) pencil by shift-invert
/// subspace iteration with a sparse factorization and a deterministic
/// start block.
EigenResult solve_two(const AssembledSystem& sys);

/// assemble followed by solve_two.
EigenResult solve_mesh(const MeshDomain& mesh);

/// Per-triangle samples of the ground state: value is the vertex average,
/// weight the metric triangle area. total_volume < 0 uses the mesh volume;
/// passing a larger volume (the convex hull's) extends the function by
/// zero, which shows up as slack measure.
WeightedSamples u1_samples(const EigenResult& res, const MeshDomain& mesh,
                           double total_volume = -1.0);

}  // namespace sgl
