#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sgl/gap_bound.hpp"
#include "sgl/meshgen.hpp"
#include "sgl/numerics.hpp"

using namespace sgl;

namespace {

constexpr double kPi = 3.14159265358979323846;

SigmaProfile identity_sigma(double r_max) {
  SigmaProfile sp;
  const int n = 33;
  sp.grid.resize(n);
  sp.sigma.resize(n);
  sp.dsigma.assign(n, 1.0);
  for (int i = 0; i < n; ++i) {
    sp.grid[i] = r_max * i / (n - 1);
    sp.sigma[i] = sp.grid[i];
  }
  sp.r_max = r_max;
  sp.exact_slopes = true;
  sp.spline = num::Pchip::fit(sp.grid, sp.sigma);
  return sp;
}

RadialProfile identity_profile(double r_max) {
  RadialProfile h;
  h.grid = {0.0, r_max};
  h.values = {0.0, r_max};
  return h;
}

// Positive, asymmetric vertex data on a rectangle mesh: the interior bubble
// times a tilt, to force the balance iteration off the centroid.
std::vector<double> tilted_bubble(const MeshDomain& mesh, double w, double h) {
  std::vector<double> u(mesh.vertices.size());
  for (size_t i = 0; i < u.size(); ++i) {
    const Vec2 v = mesh.vertices[i];
    const double bx = (0.5 * w - v.x) * (0.5 * w + v.x);
    const double by = (0.5 * h - v.y) * (0.5 * h + v.y);
    u[i] = std::max(bx, 0.0) * std::max(by, 0.0) * std::exp(2.0 * v.x + v.y);
  }
  return u;
}

// The same 3-point midpoint rule the module integrates with, rebuilt here so
// the reported residual can be confirmed against the public pieces alone.
Vec2 midpoint_balance_field(const MeshDomain& mesh,
                            const std::vector<double>& u1, Vec2 p,
                            const SigmaProfile& sigma, const RadialProfile& h,
                            double* total_u2) {
  Vec2 X{0.0, 0.0};
  double total = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = std::fabs(chart_triangle_area(mesh, (int)t));
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid =
          0.5 * (mesh.vertices[tri[e]] + mesh.vertices[tri[(e + 1) % 3]]);
      const double um = 0.5 * (u1[tri[e]] + u1[tri[(e + 1) % 3]]);
      const double w =
          area_density(mesh.chart, mesh.k, mid) * area / 3.0 * um * um;
      total += w;
      const Vec2 v = log_map(mesh.chart, mesh.k, p, mid);
      const double r = norm(v);
      if (r < 1e-15) continue;
      X = X + (w * h.eval(sigma.eval(r)) / r) * v;
    }
  }
  *total_u2 = total;
  return X;
}

struct PipelineState {
  EigenResult eig;
  BallSpectrum ball;
  GapFactors factors;
  MeshDomain hull;
  BalancePoint bp;
  SigmaProfile sigma;
  double c1 = 0.0;
};

PipelineState run_pipeline(const MeshDomain& mesh, const Spaceform& cmp) {
  PipelineState s;
  s.eig = solve_mesh(mesh);
  s.ball = comparison_ball(s.eig.lambda1, 1.0, cmp, domain_volume(mesh));
  s.factors = h_and_F(s.ball);
  s.hull = convex_hull_region(mesh);
  s.bp = balance_point(mesh, s.hull, s.eig.u1, s.factors.h, cmp);
  Vec2 p_hull = s.bp.p;
  if (s.hull.chart != mesh.chart)
    p_hull = to_affine(mesh.chart, mesh.k, s.bp.p);
  s.sigma = sigma_profile(s.hull, p_hull, cmp, 513);
  const auto [r_lo, r_hi] = radius_range(mesh, s.bp.p);
  s.c1 = c1_constant(s.sigma, cmp, r_lo, r_hi);
  return s;
}

}  // namespace

TEST_CASE("test field: flat closed form and vanishing base point") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 4, 4);
  const SigmaProfile sigma = identity_sigma(4.0);
  const RadialProfile h = identity_profile(8.0);
  const Vec2 p{0.1, 0.05};
  const std::vector<Vec2> field = test_field(mesh, p, sigma, h);
  REQUIRE(field.size() == mesh.vertices.size());
  for (size_t i = 0; i < field.size(); ++i) {
    const Vec2 expect = mesh.vertices[i] - p;
    CHECK(field[i].x == doctest::Approx(expect.x).epsilon(1e-12));
    CHECK(field[i].y == doctest::Approx(expect.y).epsilon(1e-12));
  }
  const Vec2 at_vertex = mesh.vertices[7];
  const std::vector<Vec2> f2 = test_field(mesh, at_vertex, sigma, h);
  CHECK(norm(f2[7]) == 0.0);
}

TEST_CASE("test field: norm identity in the hyperbolic chart") {
  const MeshDomain mesh = make_disk(-1.0, 1.0, 6);
  const SigmaProfile sigma = identity_sigma(4.0);
  RadialProfile h;
  h.grid = {0.0, 0.5, 4.0};
  h.values = {0.0, 0.3, 0.9};
  const Vec2 p{0.2, -0.1};
  const std::vector<Vec2> field = test_field(mesh, p, sigma, h);
  for (size_t i = 0; i < field.size(); ++i) {
    const double d = geodesic_distance(mesh.chart, mesh.k, p, mesh.vertices[i]);
    CHECK(norm(field[i]) ==
          doctest::Approx(h.eval(sigma.eval(d))).epsilon(1e-12));
  }
}

TEST_CASE("balance point: symmetric domains return the symmetry point") {
  const Spaceform flat{2, 0.0};
  const RadialProfile h = identity_profile(4.0);

  const MeshDomain disk = make_disk(0.0, 1.0, 32);
  const EigenResult ed = solve_mesh(disk);
  const MeshDomain hd = convex_hull_region(disk);
  const BalancePoint bd = balance_point(disk, hd, ed.u1, h, flat);
  CHECK(std::hypot(bd.p.x, bd.p.y) < 1e-6);
  CHECK(bd.residual <= 1e-8);

  const MeshDomain rect = make_rectangle(1.0, 2.0, 24, 48);
  const EigenResult er = solve_mesh(rect);
  const MeshDomain hr = convex_hull_region(rect);
  const BalancePoint br = balance_point(rect, hr, er.u1, h, flat);
  CHECK(std::fabs(br.p.x) < 1e-6);
  CHECK(std::fabs(br.p.y) < 1e-6);
  CHECK(br.residual <= 1e-8);
}

TEST_CASE("balance point: off-center data converges inside the hull") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 16, 16);
  const std::vector<double> u1 = tilted_bubble(mesh, 1.0, 1.0);
  const MeshDomain hull = convex_hull_region(mesh);
  const RadialProfile h = identity_profile(4.0);
  const Spaceform flat{2, 0.0};
  const BalancePoint bp = balance_point(mesh, hull, u1, h, flat);
  CHECK(bp.residual <= 1e-8);
  CHECK(bp.iterations >= 2);
  CHECK(std::hypot(bp.p.x, bp.p.y) > 1e-3);  // genuinely off the centroid
  CHECK(hull_contains(hull, bp.p));
  CHECK_FALSE(bp.trace.empty());

  // the reported residual is the balance-field norm of the public pieces
  const SigmaProfile sigma = sigma_profile(hull, bp.p, flat, 513);
  double total = 0.0;
  const Vec2 X = midpoint_balance_field(mesh, u1, bp.p, sigma, h, &total);
  CHECK(norm(X) / total <= 2e-8);
}

TEST_CASE("balance point: iteration cap reports the residual trace") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 8, 8);
  const std::vector<double> u1 = tilted_bubble(mesh, 1.0, 1.0);
  const MeshDomain hull = convex_hull_region(mesh);
  const RadialProfile h = identity_profile(4.0);
  BalanceOptions opts;
  opts.tol = 1e-30;  // unreachable
  opts.max_iterations = 2;
  CHECK_THROWS_WITH_AS(
      balance_point(mesh, hull, u1, h, Spaceform{2, 0.0}, opts),
      doctest::Contains("trace"), std::runtime_error);
}

TEST_CASE("middle inequality: near equalities on the meshed flat disk") {
  const MeshDomain mesh = make_disk(0.0, 1.0, 28);
  const Spaceform flat{2, 0.0};
  const PipelineState s = run_pipeline(mesh, flat);
  CHECK(s.c1 == doctest::Approx(1.0).epsilon(1e-8));
  const MiddleReport mr =
      middle_inequality(mesh, s.eig.u1, s.eig.lambda2 - s.eig.lambda1, s.bp.p,
                        s.sigma, s.factors, s.ball, s.c1, 1e-2);
  CHECK(mr.holds);
  CHECK(mr.chain_certified);
  CHECK(mr.chain_holds);
  CHECK(mr.rayleigh_holds);
  // every link is an equality up to discretization on the ball itself
  CHECK(mr.lhs == doctest::Approx(mr.rhs).epsilon(1e-2));
  CHECK(mr.omega_h == doctest::Approx(mr.ball_h).epsilon(5e-3));
  CHECK(mr.omega_F == doctest::Approx(mr.ball_F).epsilon(5e-3));
}

TEST_CASE("middle inequality: strict chain on the square") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 48, 48);
  const Spaceform flat{2, 0.0};
  const PipelineState s = run_pipeline(mesh, flat);
  const double gap = s.eig.lambda2 - s.eig.lambda1;
  const MiddleReport mr = middle_inequality(mesh, s.eig.u1, gap, s.bp.p,
                                            s.sigma, s.factors, s.ball, s.c1);
  CHECK(mr.holds);
  CHECK(mr.chain_certified);
  CHECK(mr.chain_holds);
  CHECK(mr.rayleigh_holds);
  // strict margins: the square is not a ball
  CHECK(mr.lhs < mr.rayleigh_lhs);
  CHECK(mr.rayleigh_lhs < mr.rhs);
  CHECK(mr.omega_h > 1.003 * mr.ball_h);
  CHECK(mr.omega_F < 0.998 * mr.ball_F);
}

TEST_CASE("middle inequality: uncertified factors block the chain") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 12, 12);
  const Spaceform flat{2, 0.0};
  const PipelineState s = run_pipeline(mesh, flat);
  GapFactors broken = s.factors;
  broken.certified = false;
  const MiddleReport mr =
      middle_inequality(mesh, s.eig.u1, s.eig.lambda2 - s.eig.lambda1, s.bp.p,
                        s.sigma, broken, s.ball, s.c1, 0.05);
  CHECK_FALSE(mr.chain_certified);
  CHECK_FALSE(mr.chain_holds);
  CHECK_FALSE(mr.rayleigh_holds);
  CHECK(mr.holds);  // the direct inequality is still evaluated
}

TEST_CASE("gap report: meshed flat disk is near sharp under refinement") {
  double prev = 1.0;
  for (int rings : {16, 24, 32}) {
    const GapBoundReport rep = evaluate_bound(make_disk(0.0, 1.0, rings), 1.0);
    CHECK(rep.verdict == "holds");
    CHECK(std::fabs(rep.relative_slack) < 0.02);
    CHECK(std::fabs(rep.relative_slack) < prev);
    CHECK(rep.curvature_const == 1.0);
    prev = std::fabs(rep.relative_slack);
  }
}

TEST_CASE("gap report: unit square against the closed-form ball bound") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 48, 48);
  const GapBoundReport rep = evaluate_bound(mesh, 1.0);
  const double j01sq = oracle::j0_first_zero() * oracle::j0_first_zero();
  const double j11sq = oracle::j1_first_zero() * oracle::j1_first_zero();
  CHECK(rep.verdict == "holds");
  CHECK(rep.gap == doctest::Approx(3.0 * kPi * kPi).epsilon(1e-2));
  CHECK(rep.bound_rhs ==
        doctest::Approx((j11sq - j01sq) * 2.0 * kPi * kPi / j01sq)
            .epsilon(1e-2));
  CHECK(rep.relative_slack > 0.01);
  CHECK(rep.relative_slack < 0.04);
  CHECK(rep.C1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.curvature_const == 1.0);
  CHECK(rep.ball_radius ==
        doctest::Approx(oracle::j0_first_zero() / std::sqrt(2.0 * kPi * kPi))
            .epsilon(1e-2));
  CHECK(rep.K_lower == 0.0);
  CHECK(rep.k_upper == 0.0);
  CHECK(rep.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gap report: alpha shrinks the comparison ball, raising the bound") {
  const MeshDomain mesh = make_rectangle(1.0, 1.0, 32, 32);
  const GapBoundReport a1 = evaluate_bound(mesh, 1.0);
  const GapBoundReport a9 = evaluate_bound(mesh, 0.9);
  CHECK(a9.alpha == 0.9);
  CHECK(a9.ball_radius < a1.ball_radius);
  CHECK(a9.bound_rhs > a1.bound_rhs);
  CHECK(a9.verdict == "holds");
}

TEST_CASE("gap report: flat scaling leaves the relative slack invariant") {
  const GapBoundReport s1 = evaluate_bound(make_rectangle(1, 1, 32, 32), 1.0);
  const GapBoundReport s2 = evaluate_bound(make_rectangle(2, 2, 32, 32), 1.0);
  CHECK(s2.gap == doctest::Approx(0.25 * s1.gap).epsilon(1e-7));
  CHECK(s2.bound_rhs == doctest::Approx(0.25 * s1.bound_rhs).epsilon(1e-7));
  CHECK(s2.relative_slack ==
        doctest::Approx(s1.relative_slack).epsilon(1e-6));
  CHECK(s2.diameter == doctest::Approx(2.0 * s1.diameter).epsilon(1e-12));
}

TEST_CASE("gap report: curvature window witnesses are enforced") {
  const MeshDomain flat_mesh = make_rectangle(1.0, 1.0, 8, 8);
  CHECK_THROWS_AS(evaluate_bound(flat_mesh, 1.0, CurvaturePair{0.5, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(evaluate_bound(flat_mesh, 1.0, CurvaturePair{-1.0, -0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(evaluate_bound(flat_mesh, 1.0, CurvaturePair{1.0, -1.0}),
                  std::domain_error);
  const MeshDomain pent = make_hyperbolic_polygon(-1.0, 5, 1.0, 12);
  CHECK_THROWS_AS(evaluate_bound(pent, 1.0, CurvaturePair{-0.5, 0.0}),
                  std::domain_error);
}

TEST_CASE("gap report: hyperbolic pentagon in both comparison windows") {
  const MeshDomain mesh = make_hyperbolic_polygon(-1.0, 5, 1.0, 32);

  const GapBoundReport native = evaluate_bound(mesh, 1.0);
  CHECK(native.verdict == "holds");
  CHECK(native.curvature_const == 1.0);
  CHECK(native.C1 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(native.relative_slack > 0.0);
  CHECK(native.relative_slack < 0.1);

  const GapBoundReport wide =
      evaluate_bound(mesh, 1.0, CurvaturePair{-1.0, 0.0});
  CHECK(wide.verdict == "holds");
  CHECK(wide.curvature_const > 1.0);
  CHECK(wide.K_lower == -1.0);
  CHECK(wide.k_upper == 0.0);
  // distortion constant stays below the sphere-area ratio at the diameter
  CHECK(wide.C1 * wide.C1 <= wide.curvature_const * (1.0 + 1e-9));
  CHECK(wide.C1 > 1.0);

  const HadamardReport hr = hadamard_ratio(wide);
  CHECK(hr.holds);
  CHECK(hr.ratio > 1.0);
  CHECK(hr.ratio < hr.ratio_bound);
  CHECK_THROWS_AS(hadamard_ratio(native), std::domain_error);
}

TEST_CASE("gap report: warped disk matches its closed forms") {
  const double c = std::sqrt(0.6);
  WarpedSurface ws;
  ws.phi = [c](double r) { return std::sinh(c * r) / c; };
  ws.R_max = 1.5;
  ws.K_lower = -0.6;
  ws.k_upper = 0.0;
  const GapBoundReport rep = evaluate_bound(ws, 1.0, 1.0);
  CHECK(rep.verdict == "holds");
  // sigma onto the flat model is sqrt(2(cosh(c r) - 1))/c, whose slope
  // cosh(c r / 2) dominates sigma/r, so C1 = cosh(c R / 2) exactly
  CHECK(rep.C1 == doctest::Approx(std::cosh(0.5 * c)).epsilon(1e-6));
  const double ratio = std::sinh(2.0 * c) / (2.0 * c);
  CHECK(rep.curvature_const == doctest::Approx(ratio * ratio).epsilon(1e-12));
  CHECK(rep.bound_rhs ==
        doctest::Approx(rep.curvature_const * rep.ball_gap).epsilon(1e-15));
  CHECK(rep.relative_slack > 0.3);
  CHECK(rep.diameter == 2.0);
  CHECK(rep.K_lower == -0.6);
  CHECK(rep.k_upper == 0.0);
}

TEST_CASE("ball sharpness across curvatures and dimensions") {
  const struct {
    int n;
    double k, R;
  } cases[] = {{2, -1.0, 1.0}, {2, 0.0, 1.0}, {2, 1.0, 0.6}, {3, 0.0, 1.0}};
  for (const auto& cs : cases) {
    CAPTURE(cs.n);
    CAPTURE(cs.k);
    const GapBoundReport rep =
        ball_sharpness_report(Spaceform{cs.n, cs.k}, cs.R);
    CHECK(rep.verdict == "holds");
    CHECK(std::fabs(rep.relative_slack) < 1e-6);
    CHECK(rep.C1 == 1.0);
    CHECK(rep.curvature_const == 1.0);
    CHECK(rep.ball_radius == doctest::Approx(cs.R).epsilon(1e-8));
  }
}

TEST_CASE("flat-comparison ratio corollary") {
  const double j01 = oracle::j0_first_zero();
  const double j11 = oracle::j1_first_zero();
  CHECK(flat_ball_ratio(2) ==
        doctest::Approx(j11 * j11 / (j01 * j01)).epsilon(1e-9));

  const GapBoundReport disk = ball_sharpness_report(Spaceform{2, 0.0}, 1.0);
  const HadamardReport hd = hadamard_ratio(disk);
  CHECK(hd.holds);
  CHECK(hd.ratio - 1.0 == doctest::Approx(hd.ratio_bound).epsilon(1e-8));

  const GapBoundReport square =
      evaluate_bound(make_rectangle(1.0, 1.0, 32, 32), 1.0);
  const HadamardReport hs = hadamard_ratio(square);
  CHECK(hs.holds);
  CHECK(hs.ratio == doctest::Approx(2.5).epsilon(1e-2));
  CHECK(hs.ratio_bound ==
        doctest::Approx(j11 * j11 / (j01 * j01) - 1.0).epsilon(1e-9));
}

TEST_CASE("report rows: csv layout and json field names") {
  const GapBoundReport rep =
      evaluate_bound(make_rectangle(1.0, 1.0, 24, 24), 1.0);
  const std::string header = report_csv_header();
  CHECK(header ==
        "lambda1,lambda2,gap,alpha,ball_radius,ball_gap,C1,curvature_const,"
        "bound_rhs,verdict,relative_slack,diameter,K_lower,k_upper");
  const std::string row = report_csv_row(rep);
  std::vector<std::string> fields;
  std::stringstream ss(row);
  std::string item;
  while (std::getline(ss, item, ',')) fields.push_back(item);
  REQUIRE(fields.size() == 14);
  CHECK(fields[9] == "holds");
  CHECK(std::stod(fields[0]) == doctest::Approx(rep.lambda1).epsilon(1e-11));
  CHECK(std::stod(fields[8]) == doctest::Approx(rep.bound_rhs).epsilon(1e-11));
  CHECK(report_csv_row(rep) == row);  // deterministic formatting

  const std::string json = report_json(rep);
  CHECK(json.find("\"verdict\":\"holds\"") != std::string::npos);
  CHECK(json.find("\"curvature_const\":") != std::string::npos);
  CHECK(json.find("\"K_lower\":") != std::string::npos);
  CHECK(json.front() == '{');
  CHECK(json.back() == '}');
}

TEST_CASE("curvature constant is monotone in diameter and window width") {
  const double base = curvature_constant(2, {-0.6, 0.0}, 2.0);
  CHECK(curvature_constant(2, {-0.6, 0.0}, 2.5) > base);
  CHECK(curvature_constant(2, {-0.8, 0.0}, 2.0) > base);
  CHECK(curvature_constant(2, {0.0, 0.0}, 2.0) == 1.0);
  CHECK(curvature_constant(3, {-0.6, 0.0}, 2.0) ==
        doctest::Approx(base * base).epsilon(1e-12));
}
