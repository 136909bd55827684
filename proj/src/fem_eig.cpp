#include "sgl/fem_eig.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sgl/charts.hpp"

namespace sgl {

namespace {

double chart_signed_area2(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * cross(b - a, c - a);
}

}  // namespace

std::array<std::array<double, 3>, 3> element_stiffness(Vec2 a, Vec2 b,
                                                       Vec2 c) {
  const double area = chart_signed_area2(a, b, c);
  if (!(area > 0))
    throw std::domain_error("degenerate or misoriented element");
  const Vec2 e[3] = {c - b, a - c, b - a};  // edge opposite each vertex
  std::array<std::array<double, 3>, 3> ke{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ke[i][j] = dot(e[i], e[j]) / (4.0 * area);
  return ke;
}

std::array<std::array<double, 3>, 3> element_mass(Chart chart, double k,
                                                  Vec2 a, Vec2 b, Vec2 c) {
  const double area = chart_signed_area2(a, b, c);
  if (!(area > 0))
    throw std::domain_error("degenerate or misoriented element");
  const Vec2 mid[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
  // P1 shape values at the edge midpoints: the midpoint of edge (i, i+1)
  // gives 1/2 to vertices i and i+1 and 0 to the opposite vertex.
  static const double psi[3][3] = {
      {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  std::array<std::array<double, 3>, 3> me{};
  for (int q = 0; q < 3; ++q) {
    const double rho = area_density(chart, k, mid[q]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        me[i][j] += (area / 3.0) * rho * psi[q][i] * psi[q][j];
  }
  return me;
}

AssembledSystem assemble(const MeshDomain& mesh) {
  validate_mesh(mesh);
  if (!chart_is_conformal(mesh.chart))
    throw std::domain_error("assembly requires a conformal chart");
  if (mesh.boundary.empty())
    throw std::domain_error(
        "mesh has no boundary loop for the Dirichlet condition");

  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<char> on_boundary(nv, 0);
  for (int idx : mesh.boundary) on_boundary[idx] = 1;

  AssembledSystem sys;
  sys.total_vertices = nv;
  std::vector<int> row(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!on_boundary[v]) {
      row[v] = static_cast<int>(sys.interior.size());
      sys.interior.push_back(v);
    }
  const int m = static_cast<int>(sys.interior.size());
  if (m < 2)
    throw std::domain_error("mesh has fewer than two interior vertices");

  std::vector<Eigen::Triplet<double>> kt, mt;
  kt.reserve(9 * mesh.triangles.size());
  mt.reserve(9 * mesh.triangles.size());
  for (const auto& tri : mesh.triangles) {
    const Vec2 a = mesh.vertices[tri[0]];
    const Vec2 b = mesh.vertices[tri[1]];
    const Vec2 c = mesh.vertices[tri[2]];
    const auto ke = element_stiffness(a, b, c);
    const auto me = element_mass(mesh.chart, mesh.k, a, b, c);
    for (int i = 0; i < 3; ++i) {
      const int ri = row[tri[i]];
      if (ri < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int rj = row[tri[j]];
        if (rj < 0) continue;
        kt.emplace_back(ri, rj, ke[i][j]);
        mt.emplace_back(ri, rj, me[i][j]);
      }
    }
  }
  sys.stiffness.resize(m, m);
  sys.mass.resize(m, m);
  sys.stiffness.setFromTriplets(kt.begin(), kt.end());
  sys.mass.setFromTriplets(mt.begin(), mt.end());
  sys.stiffness.makeCompressed();
  sys.mass.makeCompressed();
  return sys;
}

EigenResult solve_two(const AssembledSystem& sys) {
  const int m = static_cast<int>(sys.interior.size());
  if (m < 2)
    throw std::domain_error("pencil is too small for two eigenpairs");
  const int s = std::min(6, m);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(sys.stiffness);
  if (factor.info() != Eigen::Success)
    throw std::runtime_error("stiffness factorization failed");

  std::mt19937 gen(20240817u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd x(m, s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < m; ++i) x(i, j) = unif(gen);

  const double kResidualTarget = 1e-10;
  const int kMaxIter = 500;
  Eigen::VectorXd ritz;
  double res1 = 1.0, res2 = 1.0, res3 = 0.0;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::MatrixXd y = factor.solve(sys.mass * x);
    const Eigen::MatrixXd ky = sys.stiffness * y;
    const Eigen::MatrixXd my = sys.mass * y;
    const Eigen::MatrixXd kr = y.transpose() * ky;
    const Eigen::MatrixXd mr = y.transpose() * my;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> small(
        0.5 * (kr + kr.transpose()), 0.5 * (mr + mr.transpose()));
    if (small.info() != Eigen::Success)
      throw std::runtime_error("dense projection eigensolver failed");
    ritz = small.eigenvalues();
    x = y * small.eigenvectors();  // M-orthonormal columns

    auto residual = [&](int j) {
      const Eigen::VectorXd kx = sys.stiffness * x.col(j);
      const Eigen::VectorXd mx = sys.mass * x.col(j);
      return (kx - ritz(j) * mx).norm() / (ritz(j) * mx.norm());
    };
    res1 = residual(0);
    res2 = residual(1);
    // the third pair feeds the degeneracy flag, so it must converge too
    res3 = s > 2 ? residual(2) : 0.0;
    if (res1 < kResidualTarget && res2 < kResidualTarget &&
        res3 < kResidualTarget)
      break;
  }
  if (!(res1 < 1e-8 && res2 < 1e-8))
    throw std::runtime_error("eigensolver did not converge");

  EigenResult out;
  out.lambda1 = ritz(0);
  out.lambda2 = ritz(1);
  out.lambda3 = s > 2 ? ritz(2) : std::numeric_limits<double>::infinity();
  out.residual1 = res1;
  out.residual2 = res2;
  if (!(out.lambda1 > 0 && out.lambda1 < out.lambda2))
    throw std::runtime_error("eigenvalue ordering violated");
  out.degenerate_second = (out.lambda3 - out.lambda2) < 1e-6 * out.lambda2;
  out.ortho_defect = std::fabs(x.col(0).dot(sys.mass * x.col(1)));

  Eigen::VectorXd u = x.col(0);
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < m; ++i)
    if (std::fabs(u(i)) > best) {
      best = std::fabs(u(i));
      arg = i;
    }
  if (u(arg) < 0) u = -u;
  const double scale = u(arg);
  out.mass_norm = std::sqrt(u.dot(sys.mass * u)) / scale;
  out.u1.assign(sys.total_vertices, 0.0);
  for (int i = 0; i < m; ++i) out.u1[sys.interior[i]] = u(i) / scale;
  return out;
}

EigenResult solve_mesh(const MeshDomain& mesh) {
  return solve_two(assemble(mesh));
}

WeightedSamples u1_samples(const EigenResult& res, const MeshDomain& mesh,
                           double total_volume) {
  if (res.u1.size() != mesh.vertices.size())
    throw std::domain_error("eigenvector does not match the mesh");
  WeightedSamples ws;
  ws.pairs.reserve(mesh.triangles.size());
  double vol = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double v =
        (res.u1[tri[0]] + res.u1[tri[1]] + res.u1[tri[2]]) / 3.0;
    const double w = metric_triangle_area(mesh, static_cast<int>(t));
    vol += w;
    ws.pairs.emplace_back(std::max(v, 0.0), w);
  }
  if (total_volume < 0) {
    ws.total_measure = vol;
  } else {
    if (total_volume < vol * (1.0 - 1e-12))
      throw std::domain_error(
          "extension volume is smaller than the mesh volume");
    ws.total_measure = total_volume;
  }
  return ws;
}

}  // namespace sgl
