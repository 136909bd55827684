#include "sgl/spaceform.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sgl/numerics.hpp"

namespace sgl {

namespace {
constexpr double kSeam = 1e-8;  // below |k| r^2 = kSeam use series

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}
}  // namespace

double unit_ball_volume(int n) {
  require(n >= 1, "unit_ball_volume: n >= 1 required");
  static std::vector<double> cache{1.0, 2.0};  // omega_0, omega_1
  for (int m = static_cast<int>(cache.size()); m <= n; ++m)
    cache.push_back(cache[m - 2] * 2.0 * M_PI / m);
  return cache[n];
}

double sn(double k, double r) {
  const double kr2 = k * r * r;
  if (std::abs(kr2) < kSeam)
    return r * (1.0 - kr2 / 6.0 + kr2 * kr2 / 120.0);
  if (k > 0.0) {
    const double c = std::sqrt(k);
    return std::sin(c * r) / c;
  }
  const double c = std::sqrt(-k);
  return std::sinh(c * r) / c;
}

double sn_prime(double k, double r) {
  const double kr2 = k * r * r;
  if (std::abs(kr2) < kSeam) return 1.0 - kr2 / 2.0 + kr2 * kr2 / 24.0;
  if (k > 0.0) return std::cos(std::sqrt(k) * r);
  return std::cosh(std::sqrt(-k) * r);
}

double sn_inverse(double k, double s) {
  require(s >= 0.0, "sn_inverse: s >= 0 required");
  const double ks2 = k * s * s;
  if (std::abs(ks2) < kSeam)
    return s * (1.0 + ks2 / 6.0 + 3.0 * ks2 * ks2 / 40.0);
  if (k > 0.0) {
    const double c = std::sqrt(k);
    require(c * s <= 1.0 + 1e-14, "sn_inverse: s beyond sn range for k > 0");
    return std::asin(std::min(1.0, c * s)) / c;
  }
  const double c = std::sqrt(-k);
  return std::asinh(c * s) / c;
}

double hemisphere_radius(double k) {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * M_PI / std::sqrt(k);
}

double total_volume(const Spaceform& sf) {
  if (sf.k <= 0.0) return std::numeric_limits<double>::infinity();
  return ball_volume(sf, M_PI / std::sqrt(sf.k));
}

double ball_volume(const Spaceform& sf, double r) {
  require(sf.n >= 2, "ball_volume: n >= 2 required");
  require(r >= 0.0, "ball_volume: r >= 0 required");
  if (sf.k > 0.0)
    require(r <= M_PI / std::sqrt(sf.k) + 1e-12,
            "ball_volume: r beyond model diameter for k > 0");
  if (r == 0.0) return 0.0;
  const int nm1 = sf.n - 1;
  const double k = sf.k;
  const double integral = num::gauss_legendre(
      [k, nm1](double rho) { return std::pow(sn(k, rho), nm1); }, 0.0, r,
      num::panels_for(0.0, r, k));
  return sf.n * unit_ball_volume(sf.n) * integral;
}

double sphere_area(const Spaceform& sf, double r) {
  require(sf.n >= 2, "sphere_area: n >= 2 required");
  require(r >= 0.0, "sphere_area: r >= 0 required");
  const double s = sn(sf.k, r);
  require(s >= 0.0, "sphere_area: r beyond model diameter for k > 0");
  return sf.n * unit_ball_volume(sf.n) * std::pow(s, sf.n - 1);
}

double radius_for_volume(const Spaceform& sf, double s) {
  require(s >= 0.0, "radius_for_volume: s >= 0 required");
  if (s == 0.0) return 0.0;
  double hi;
  if (sf.k > 0.0) {
    const double total = total_volume(sf);
    require(s <= total * (1.0 + 1e-12),
            "radius_for_volume: volume exceeds the model space");
    hi = M_PI / std::sqrt(sf.k);
    if (s >= total) return hi;
  } else {
    hi = std::pow(s / unit_ball_volume(sf.n), 1.0 / sf.n);
    while (ball_volume(sf, hi) < s) hi *= 1.5;
  }
  return num::newton_increasing(
      [&](double r) { return ball_volume(sf, r); },
      [&](double r) { return sphere_area(sf, r); }, s, 0.0, hi, 1e-13);
}

double iso_profile(const Spaceform& sf, double s) {
  return sphere_area(sf, radius_for_volume(sf, s));
}

double curvature_constant(int n, const CurvaturePair& pair, double d) {
  require(n >= 2, "curvature_constant: n >= 2 required");
  require(pair.K_lower <= pair.k_upper + 1e-15,
          "curvature_constant: K_lower <= k_upper required");
  require(d > 0.0, "curvature_constant: d > 0 required");
  if (pair.k_upper > 0.0)
    require(d < M_PI / std::sqrt(pair.k_upper),
            "curvature_constant: d beyond conjugate distance of k_upper");
  const double ratio = sn(pair.K_lower, d) / sn(pair.k_upper, d);
  return std::pow(ratio, 2 * n - 2);
}

}  // namespace sgl
