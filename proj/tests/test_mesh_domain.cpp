#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sgl/mesh_domain.hpp"
#include "sgl/meshgen.hpp"

using namespace sgl;

namespace {

MeshDomain star_mesh_hyperbolic(double k, int spikes, double r_out,
                                double r_in) {
  // star polygon fanned from the center (star-shaped, hence valid)
  const double c = std::sqrt(-k);
  MeshDomain mesh;
  mesh.chart = Chart::poincare_disk;
  mesh.k = k;
  mesh.vertices.push_back({0, 0});
  const int m = 2 * spikes;
  for (int i = 0; i < m; ++i) {
    const double r = (i % 2 == 0) ? r_out : r_in;
    const double rho = std::tanh(0.5 * c * r);
    const double th = 2.0 * M_PI * i / m;
    mesh.vertices.push_back({rho * std::cos(th), rho * std::sin(th)});
    mesh.boundary.push_back(i + 1);
  }
  for (int i = 0; i < m; ++i)
    mesh.triangles.push_back({0, 1 + i, 1 + (i + 1) % m});
  validate_mesh(mesh);
  return mesh;
}

}  // namespace

TEST_CASE("mesh files round-trip exactly") {
  const MeshDomain disk = make_disk(-1.0, 0.8, 6);
  const std::string path = "/tmp/sgl_roundtrip.mesh";
  save_mesh(disk, path);
  const MeshDomain back = load_mesh(path);
  CHECK(back.chart == disk.chart);
  CHECK(back.k == disk.k);
  REQUIRE(back.vertices.size() == disk.vertices.size());
  for (size_t i = 0; i < disk.vertices.size(); ++i) {
    CHECK(back.vertices[i].x == disk.vertices[i].x);
    CHECK(back.vertices[i].y == disk.vertices[i].y);
  }
  REQUIRE(back.triangles.size() == disk.triangles.size());
  CHECK(back.triangles == disk.triangles);
  CHECK(back.boundary == disk.boundary);
}

TEST_CASE("mesh parser reports line-numbered diagnostics") {
  auto parse_str = [](const std::string& text) {
    std::istringstream in(text);
    return parse_mesh(in, "test");
  };
  CHECK_THROWS_WITH_AS(parse_str("BOGUS 1 flat 0\n1 1\n"),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_str("SGLMESH 1 flat 0\n-3 1\n"),
                       doctest::Contains("line 2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_str("SGLMESH 1 flat 0\n3 1\n0 0\n1 zero\n0 1\n0 1 2\nB 0\n"),
      doctest::Contains("line 4"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_str("SGLMESH 2 flat 0\n3 1\n"),
                       doctest::Contains("version"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_str("SGLMESH 1 flat 0\n3 1\n0 0\n1 0\n0 1\n0 1 2\nB 1\nxx\n"),
      doctest::Contains("line 8"), std::runtime_error);
  // truncated file
  CHECK_THROWS_WITH_AS(parse_str("SGLMESH 1 flat 0\n3 1\n0 0\n1 0\n"),
                       doctest::Contains("unexpected end"), std::runtime_error);
  // well-formed triangle parses
  const MeshDomain tri =
      parse_str("SGLMESH 1 flat 0\n3 1\n0 0\n1 0\n0 1\n0 1 2\nB 3\n0 1 2\n");
  CHECK(tri.triangles.size() == 1);
}

TEST_CASE("structural validation rejects broken meshes") {
  MeshDomain mesh;
  mesh.chart = Chart::flat;
  mesh.vertices = {{0, 0}, {1, 0}, {0, 1}};
  mesh.triangles = {{0, 1, 2}};
  validate_mesh(mesh);  // fine
  // clockwise orientation
  MeshDomain cw = mesh;
  cw.triangles = {{0, 2, 1}};
  CHECK_THROWS_AS(validate_mesh(cw), std::domain_error);
  // degenerate triangle
  MeshDomain degen = mesh;
  degen.vertices[2] = {2, 0};
  CHECK_THROWS_AS(validate_mesh(degen), std::domain_error);
  // index out of range
  MeshDomain oob = mesh;
  oob.triangles = {{0, 1, 7}};
  CHECK_THROWS_AS(validate_mesh(oob), std::domain_error);
  // vertex outside the chart domain
  MeshDomain far_v = mesh;
  far_v.chart = Chart::poincare_disk;
  far_v.k = -1.0;
  far_v.vertices[1] = {1.5, 0};
  CHECK_THROWS_AS(validate_mesh(far_v), std::domain_error);
  // wrong curvature sign for the chart
  MeshDomain sign = mesh;
  sign.k = -1.0;
  CHECK_THROWS_AS(validate_mesh(sign), std::domain_error);
}

TEST_CASE("metric areas converge to the closed-form ball volumes") {
  // flat unit square: exact
  const MeshDomain sq = make_rectangle(1.0, 1.0, 8, 8);
  CHECK(domain_volume(sq) == doctest::Approx(1.0).epsilon(1e-13));
  // curved disks: inscribed-polygon area deficit is O(h^2)
  for (double k : {-1.0, 0.7}) {
    const Spaceform sf{2, k};
    const double R = k > 0 ? 0.6 : 1.0;
    const double coarse =
        std::fabs(domain_volume(make_disk(k, R, 12)) - ball_volume(sf, R));
    const double fine =
        std::fabs(domain_volume(make_disk(k, R, 24)) - ball_volume(sf, R));
    CHECK(fine < coarse);
    CHECK(fine < 5e-3 * ball_volume(sf, R));
    CHECK(fine > 1e-12);  // polygon strictly inscribed
  }
}

TEST_CASE("diameter over boundary vertices") {
  CHECK(diameter(make_disk(0.0, 1.0, 16)) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(diameter(make_rectangle(1.0, 2.0, 4, 8)) ==
        doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));
  // antipodal boundary pairs realize 2R exactly on even rings
  CHECK(diameter(make_disk(-1.0, 1.0, 12)) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(diameter(make_disk(1.0, 0.6, 12)) == doctest::Approx(1.2).epsilon(1e-11));
}

TEST_CASE("convex hull of a convex mesh is the mesh boundary") {
  const MeshDomain disk = make_disk(0.0, 1.0, 8);
  const MeshDomain hull = convex_hull_region(disk);
  CHECK(hull.chart == Chart::flat);
  CHECK(hull.vertices.size() == disk.boundary.size());
  CHECK(domain_volume(hull) == doctest::Approx(domain_volume(disk)).epsilon(1e-12));
  // idempotence
  const MeshDomain hull2 = convex_hull_region(hull);
  CHECK(hull2.vertices.size() == hull.vertices.size());
  CHECK(domain_volume(hull2) == doctest::Approx(domain_volume(hull)).epsilon(1e-12));
}

TEST_CASE("flat L-shape hull fills in the notch") {
  // unit square minus the open upper-right quadrant, on a half-unit grid
  MeshDomain lshape;
  lshape.chart = Chart::flat;
  lshape.vertices = {{0, 0},   {0.5, 0},   {1, 0},   {0, 0.5},
                     {0.5, 0.5}, {1, 0.5}, {0, 1},   {0.5, 1}};
  lshape.triangles = {{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4},
                      {3, 4, 7}, {3, 7, 6}};
  lshape.boundary = {0, 1, 2, 5, 4, 7, 6, 3};
  validate_mesh(lshape);
  CHECK(domain_volume(lshape) == doctest::Approx(0.75).epsilon(1e-14));
  const MeshDomain hull = convex_hull_region(lshape);
  REQUIRE(hull.vertices.size() == 5);
  CHECK(domain_volume(hull) == doctest::Approx(0.875).epsilon(1e-13));
  CHECK(hull_contains(hull, {0.7, 0.7}));   // filled notch
  CHECK(!point_in_mesh(lshape, {0.7, 0.7}));
  CHECK(point_in_mesh(lshape, {0.2, 0.8}));
}

TEST_CASE("hyperbolic star hull is the geodesic polygon of its spikes") {
  const double k = -1.0;
  const MeshDomain star = star_mesh_hyperbolic(k, 5, 1.0, 0.3);
  const MeshDomain hull = convex_hull_region(star);
  CHECK(hull.chart == Chart::klein);
  REQUIRE(hull.vertices.size() == 5);
  for (const Vec2& v : hull.vertices) {
    const double r = geodesic_distance(Chart::klein, k, {0, 0}, v);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  }
  // convexity by geodesic-midpoint membership sampling
  std::mt19937 rng(404u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    // random points inside the hull: convex combos of klein vertices
    Vec2 a{0, 0}, b{0, 0};
    double wa = 0, wb = 0;
    for (const Vec2& v : hull.vertices) {
      const double ta = u(rng), tb = u(rng);
      a = a + ta * v;
      b = b + tb * v;
      wa += ta;
      wb += tb;
    }
    a = (1.0 / wa) * a;
    b = (1.0 / wb) * b;
    const Vec2 mid = exp_map(Chart::klein, k, a,
                             0.5 * log_map(Chart::klein, k, a, b));
    CHECK(hull_contains(hull, mid, 1e-9));
  }
  // hull diameter equals the star diameter (spikes realize it)
  CHECK(diameter(hull) == doctest::Approx(diameter(star)).epsilon(1e-12));
}

TEST_CASE("spherical eligibility rules") {
  // a cap of radius 0.9 has diameter 1.8 > pi/2: hull must refuse
  const MeshDomain big = make_disk(1.0, 0.9, 8);
  CHECK_THROWS_WITH_AS(convex_hull_region(big), doctest::Contains("ineligible"),
                       std::domain_error);
  // a declared injectivity radius below the hull diameter also refuses
  const MeshDomain ok = make_disk(1.0, 0.6, 8);
  CHECK_NOTHROW(convex_hull_region(ok));
  CHECK_THROWS_AS(convex_hull_region(ok, 1.0), std::domain_error);
}

TEST_CASE("hull membership and projection") {
  const MeshDomain hull = convex_hull_region(make_disk(0.0, 1.0, 6));
  CHECK(hull_contains(hull, {0.2, 0.1}));
  CHECK(!hull_contains(hull, {1.2, 0}));
  const Vec2 inside = project_to_hull(hull, {0.3, -0.2});
  CHECK(inside.x == 0.3);
  CHECK(inside.y == -0.2);
  const Vec2 far_proj = project_to_hull(hull, {3.0, 0.0});
  CHECK(norm(far_proj) <= 1.0 + 1e-12);
  CHECK(hull_contains(hull, far_proj, 1e-9));
}

TEST_CASE("sigma is the identity in the full-ball regime") {
  // flat hull: inscribed polygon of the unit disk; p at the center
  const MeshDomain hull = convex_hull_region(make_disk(0.0, 1.0, 16));
  const Spaceform flat{2, 0.0};
  const SigmaProfile sp = sigma_profile(hull, {0, 0}, flat, 257);
  const double inradius = std::cos(M_PI / 96.0);  // 96 boundary vertices
  for (double r : {0.1, 0.4, 0.8, 0.95 * inradius})
    CHECK(sp.eval(r) == doctest::Approx(r).epsilon(1e-12));
  // saturation: sigma(r_max) matches the hull volume
  const double vol = domain_volume(hull);
  CHECK(sp.sigma.back() ==
        doctest::Approx(radius_for_volume(flat, vol)).epsilon(1e-10));
  // monotone nondecreasing, sigma <= r for same-curvature ambient
  for (size_t i = 1; i < sp.sigma.size(); ++i) {
    CHECK(sp.sigma[i] >= sp.sigma[i - 1] - 1e-14);
    CHECK(sp.sigma[i] <= sp.grid[i] * (1.0 + 1e-12));
  }
}

TEST_CASE("sigma with an off-center base point and curved targets") {
  const MeshDomain hull = convex_hull_region(make_disk(0.0, 1.0, 16));
  const Spaceform hyp{2, -1.0};
  const Vec2 p{0.3, 0.1};
  const SigmaProfile sp = sigma_profile(hull, p, hyp, 257);
  // full-ball regime: |B_r| = pi r^2 transfers to acosh(1 + r^2/2).
  // Compare at profile nodes, where the value is pure quadrature with no
  // interpolation error on top.
  const double clearance = 1.0 - norm(p) - 0.1;
  int checked = 0;
  for (size_t i = 0; i < sp.grid.size(); ++i) {
    const double r = sp.grid[i];
    if (r < 0.05 || r > clearance) continue;
    const double expect = std::acosh(1.0 + 0.5 * r * r);
    CHECK(sp.sigma[i] == doctest::Approx(expect).epsilon(1e-11));
    ++checked;
  }
  CHECK(checked > 50);
  for (double r : {0.1, 0.3, clearance})
    CHECK(sp.eval(r) ==
          doctest::Approx(std::acosh(1.0 + 0.5 * r * r)).epsilon(1e-8));
  CHECK_THROWS_AS(sigma_profile(hull, {1.5, 0}, hyp, 65), std::domain_error);
}

TEST_CASE("sigma on hyperbolic hulls matches the model: identity and saturation") {
  const double k = -1.0;
  const MeshDomain hull = convex_hull_region(make_disk(k, 1.0, 14));
  const Spaceform sf{2, k};
  const SigmaProfile sp = sigma_profile(hull, {0, 0}, sf, 257);
  for (double r : {0.2, 0.5, 0.8})
    CHECK(sp.eval(r) == doctest::Approx(r).epsilon(1e-10));
  CHECK(sp.sigma.back() ==
        doctest::Approx(radius_for_volume(sf, domain_volume(hull)))
            .epsilon(1e-9));
  for (size_t i = 0; i < sp.grid.size(); ++i)
    CHECK(sp.sigma[i] <= sp.grid[i] * (1.0 + 1e-10) + 1e-12);
}

TEST_CASE("sigma is refinement-stable") {
  const Spaceform flat{2, 0.0};
  const MeshDomain coarse_hull = convex_hull_region(make_disk(0.0, 1.0, 10));
  const MeshDomain fine_hull = convex_hull_region(make_disk(0.0, 1.0, 20));
  const Vec2 p{0.2, -0.1};
  const SigmaProfile a = sigma_profile(coarse_hull, p, flat, 257);
  const SigmaProfile b = sigma_profile(fine_hull, p, flat, 257);
  for (double r : {0.3, 0.6, 0.9, 1.1})
    CHECK(a.eval(r) == doctest::Approx(b.eval(r)).epsilon(5e-3));
  const double c1a = c1_constant(a, flat, 0.0, a.r_max);
  const double c1b = c1_constant(b, flat, 0.0, b.r_max);
  CHECK(c1a == doctest::Approx(c1b).epsilon(5e-3));
}

TEST_CASE("radial sigma for warped surfaces has the closed form") {
  const Spaceform flat{2, 0.0};
  auto phi = [](double r) { return r + 0.1 * r * r * r; };
  const SigmaProfile sp = sigma_profile_radial(phi, 1.0, flat, 513);
  for (size_t i = 0; i < sp.grid.size(); ++i) {
    const double r = sp.grid[i];
    CHECK(sp.sigma[i] ==
          doctest::Approx(r * std::sqrt(1.0 + 0.05 * r * r)).epsilon(1e-12));
    const double dexp =
        (1.0 + 0.1 * r * r) / std::sqrt(1.0 + 0.05 * r * r);
    CHECK(sp.dsigma[i] == doctest::Approx(dexp).epsilon(1e-11));
  }
  // C1 over the full radius range is the endpoint slope
  const double c1 = c1_constant(sp, flat, 0.0, 1.0);
  CHECK(c1 == doctest::Approx(1.1 / std::sqrt(1.05)).epsilon(1e-9));
  CHECK(c1 == doctest::Approx(1.07349008).epsilon(1e-8));
}

TEST_CASE("C1 equals one for convex domains in the model space") {
  const double k = -1.0;
  const Spaceform sf{2, k};
  const MeshDomain star = star_mesh_hyperbolic(k, 5, 1.0, 0.3);
  const MeshDomain hull = convex_hull_region(star);
  const SigmaProfile sp = sigma_profile(hull, {0, 0}, sf, 513);
  const double c1 = c1_constant(sp, sf, 0.0, sp.r_max);
  CHECK(c1 == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(c1 >= 1.0 - 1e-9);
  // flat convex hull, with the base point off-center
  const Spaceform flat{2, 0.0};
  const MeshDomain dh = convex_hull_region(make_disk(0.0, 1.0, 12));
  const SigmaProfile sp2 = sigma_profile(dh, {0.25, 0.1}, flat, 513);
  const double c12 = c1_constant(sp2, flat, 0.0, sp2.r_max);
  CHECK(c12 == doctest::Approx(1.0).epsilon(2e-4));
  CHECK_THROWS_AS(c1_constant(sp2, flat, 1.0, 0.5), std::domain_error);
}

TEST_CASE("radius range of a mesh about a base point") {
  const MeshDomain disk = make_disk(0.0, 1.0, 8);
  const auto [lo, hi] = radius_range(disk, {0, 0});
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
  const auto [lo2, hi2] = radius_range(disk, {2.0, 0.0});
  CHECK(lo2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi2 == doctest::Approx(3.0).epsilon(1e-12));
}
