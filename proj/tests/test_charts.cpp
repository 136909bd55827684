#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "sgl/charts.hpp"
#include "sgl/numerics.hpp"
#include "sgl/spaceform.hpp"

using namespace sgl;

namespace {

Vec2 random_point(std::mt19937& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec2 p{u(rng), u(rng)};
  while (norm(p) >= radius) p = {u(rng), u(rng)};
  return p;
}

struct ChartCase {
  Chart chart;
  double k;
  double span;  // sampling radius inside the chart domain
};

const ChartCase kCases[] = {
    {Chart::flat, 0.0, 2.0},          {Chart::poincare_disk, -1.0, 0.95},
    {Chart::poincare_disk, -2.5, 0.9}, {Chart::stereographic, 1.0, 0.95},
    {Chart::stereographic, 0.3, 0.9},  {Chart::klein, -1.0, 0.95},
    {Chart::gnomonic, 1.0, 3.0},
};

}  // namespace

TEST_CASE("closed-form distances against known values") {
  CHECK(geodesic_distance(Chart::flat, 0.0, {0, 0}, {3, 4}) ==
        doctest::Approx(5.0).epsilon(1e-15));
  // hyperbolic disk: center to chart radius 1/2 is 2 artanh(1/2)
  CHECK(geodesic_distance(Chart::poincare_disk, -1.0, {0, 0}, {0.5, 0}) ==
        doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-15));
  // sphere: a point and its antipodal image are half a great circle apart
  CHECK(geodesic_distance(Chart::stereographic, 1.0, {2, 0}, {-0.5, 0}) ==
        doctest::Approx(M_PI).epsilon(1e-14));
  // curvature scaling: distances scale like 1/sqrt(|k|)
  const double d1 = geodesic_distance(Chart::poincare_disk, -1.0, {0.1, 0.2},
                                      {-0.3, 0.4});
  const double d4 = geodesic_distance(Chart::poincare_disk, -4.0, {0.1, 0.2},
                                      {-0.3, 0.4});
  CHECK(d4 == doctest::Approx(d1 / 2.0).epsilon(1e-14));
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  std::mt19937 rng(881u);
  for (const auto& cs : kCases) {
    for (int rep = 0; rep < 60; ++rep) {
      const Vec2 a = random_point(rng, cs.span);
      const Vec2 b = random_point(rng, cs.span);
      const Vec2 c = random_point(rng, cs.span);
      const double ab = geodesic_distance(cs.chart, cs.k, a, b);
      const double ba = geodesic_distance(cs.chart, cs.k, b, a);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
      const double ac = geodesic_distance(cs.chart, cs.k, a, c);
      const double cb = geodesic_distance(cs.chart, cs.k, c, b);
      CHECK(ab <= ac + cb + 1e-12);
    }
  }
}

TEST_CASE("conformal and affine charts agree through the conversions") {
  std::mt19937 rng(17u);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec2 a = random_point(rng, 0.95);
    const Vec2 b = random_point(rng, 0.95);
    // hyperbolic pair
    const double dp = geodesic_distance(Chart::poincare_disk, -1.3, a, b);
    const double dk = geodesic_distance(Chart::klein, -1.3,
                                        to_affine(Chart::poincare_disk, -1.3, a),
                                        to_affine(Chart::poincare_disk, -1.3, b));
    CHECK(dk == doctest::Approx(dp).epsilon(1e-12));
    // spherical pair
    const double ds = geodesic_distance(Chart::stereographic, 0.7, a, b);
    const double dg = geodesic_distance(Chart::gnomonic, 0.7,
                                        to_affine(Chart::stereographic, 0.7, a),
                                        to_affine(Chart::stereographic, 0.7, b));
    CHECK(dg == doctest::Approx(ds).epsilon(1e-12));
  }
}

TEST_CASE("chart conversions round-trip to machine precision") {
  std::mt19937 rng(54u);
  for (int rep = 0; rep < 300; ++rep) {
    const Vec2 p = random_point(rng, 0.999);
    const Vec2 back_h = to_conformal(
        Chart::klein, -2.0, to_affine(Chart::poincare_disk, -2.0, p));
    CHECK(back_h.x == doctest::Approx(p.x).epsilon(1e-12));
    CHECK(back_h.y == doctest::Approx(p.y).epsilon(1e-12));
    const Vec2 q = random_point(rng, 0.98);
    const Vec2 back_s = to_conformal(
        Chart::gnomonic, 0.5, to_affine(Chart::stereographic, 0.5, q));
    CHECK(back_s.x == doctest::Approx(q.x).epsilon(1e-12));
    CHECK(back_s.y == doctest::Approx(q.y).epsilon(1e-12));
  }
}

TEST_CASE("conformal factor matches the finite-difference metric") {
  std::mt19937 rng(202u);
  for (const auto& cs : kCases) {
    if (!chart_is_conformal(cs.chart)) continue;
    for (int rep = 0; rep < 20; ++rep) {
      const Vec2 p = random_point(rng, 0.8 * cs.span);
      const double phi = conformal_factor(cs.chart, cs.k, p);
      const double eps = 1e-6;
      for (const Vec2 e : {Vec2{eps, 0}, Vec2{0, eps}}) {
        const double d = geodesic_distance(cs.chart, cs.k, p, p + e);
        CHECK(d / eps == doctest::Approx(phi).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("area densities integrate to the model ball volumes") {
  // polar quadrature of the density over a centered chart disk must equal
  // the closed-form volume of the geodesic ball it represents
  auto chart_radius = [](Chart chart, double k, double r) {
    const double c = std::sqrt(std::fabs(k));
    switch (chart) {
      case Chart::flat: return r;
      case Chart::poincare_disk: return std::tanh(0.5 * c * r);
      case Chart::stereographic: return std::tan(0.5 * c * r);
      case Chart::klein: return std::tanh(c * r);
      case Chart::gnomonic: return std::tan(c * r);
    }
    return 0.0;
  };
  for (const auto& cs : kCases) {
    const Spaceform sf{2, cs.k};
    const double r_geo = cs.k > 0 ? 0.6 * hemisphere_radius(cs.k) : 1.1;
    const double rho = chart_radius(cs.chart, cs.k, r_geo);
    auto integrand = [&](double s) {
      return 2.0 * M_PI * s * area_density(cs.chart, cs.k, {s, 0.0});
    };
    const double area = num::gauss_legendre(integrand, 0.0, rho, 64);
    CHECK(area == doctest::Approx(ball_volume(sf, r_geo)).epsilon(1e-12));
  }
}

TEST_CASE("log and exp maps invert each other and respect distance") {
  std::mt19937 rng(3303u);
  for (const auto& cs : kCases) {
    for (int rep = 0; rep < 40; ++rep) {
      const Vec2 p = random_point(rng, 0.85 * cs.span);
      const Vec2 x = random_point(rng, 0.85 * cs.span);
      const Vec2 v = log_map(cs.chart, cs.k, p, x);
      CHECK(norm(v) ==
            doctest::Approx(geodesic_distance(cs.chart, cs.k, p, x))
                .epsilon(1e-11));
      const Vec2 back = exp_map(cs.chart, cs.k, p, v);
      CHECK(back.x == doctest::Approx(x.x).epsilon(5e-11));
      CHECK(back.y == doctest::Approx(x.y).epsilon(5e-11));
      // the zero vector is the fixed point
      const Vec2 self = log_map(cs.chart, cs.k, p, p);
      CHECK(norm(self) == 0.0);
    }
  }
}

TEST_CASE("exp parametrizes geodesics: additive along the ray, straight in affine charts") {
  std::mt19937 rng(9090u);
  for (const auto& cs : kCases) {
    for (int rep = 0; rep < 15; ++rep) {
      const Vec2 p = random_point(rng, 0.5 * cs.span);
      std::uniform_real_distribution<double> ua(0.0, 2.0 * M_PI);
      const double th = ua(rng);
      const Vec2 dir{std::cos(th), std::sin(th)};
      const double len = (cs.k > 0) ? 0.5 : 0.9;
      // midpoint property: d(p, m) = d(m, q) = d(p, q)/2
      const Vec2 q = exp_map(cs.chart, cs.k, p, len * dir);
      const Vec2 m = exp_map(cs.chart, cs.k, p, (0.5 * len) * dir);
      const double dpq = geodesic_distance(cs.chart, cs.k, p, q);
      CHECK(dpq == doctest::Approx(len).epsilon(1e-12));
      CHECK(geodesic_distance(cs.chart, cs.k, p, m) ==
            doctest::Approx(0.5 * len).epsilon(1e-12));
      CHECK(geodesic_distance(cs.chart, cs.k, m, q) ==
            doctest::Approx(0.5 * len).epsilon(1e-11));
      // in the geodesic-affine charts the three points are collinear
      if (!chart_is_conformal(cs.chart) || cs.chart == Chart::flat) {
        const Vec2 u1 = m - p, u2 = q - p;
        CHECK(std::fabs(cross(u1, u2)) < 1e-10);
      }
    }
  }
}

TEST_CASE("chart validation rejects out-of-domain points and wrong curvature") {
  CHECK_THROWS_AS(geodesic_distance(Chart::poincare_disk, -1.0, {1.2, 0}, {0, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(geodesic_distance(Chart::klein, -1.0, {0, 0}, {0, 1.0}),
                  std::domain_error);
  CHECK_THROWS_AS(geodesic_distance(Chart::poincare_disk, 1.0, {0, 0}, {0.1, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(geodesic_distance(Chart::flat, -1.0, {0, 0}, {1, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(conformal_factor(Chart::klein, -1.0, {0, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(to_affine(Chart::stereographic, 1.0, {1.5, 0}),
                  std::domain_error);
  CHECK_THROWS_AS(chart_from_string("mercator"), std::domain_error);
  CHECK(chart_from_string(chart_name(Chart::gnomonic)) == Chart::gnomonic);
}
