#include "sgl/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sgl/numerics.hpp"

namespace sgl {

namespace {

// int_a^b f(r) A(r) dr with f evaluated by the caller-provided functor,
// composite Gauss-Legendre with curvature-aware panel count.
double shell_integral(const std::function<double(double)>& f,
                      const Spaceform& sf, double a, double b) {
  if (!(b > a)) return 0.0;
  auto g = [&](double r) { return f(r) * sphere_area(sf, r); };
  const int panels =
      std::max(num::panels_for(a, b, sf.k), static_cast<int>((b - a) * 32) + 1);
  return num::gauss_legendre(g, a, b, panels);
}

// Integral of f A over [a, b] with integration cells aligned to every
// supplied profile grid, so piecewise-linear integrands are polynomial on
// each cell and the per-cell rule is effectively exact.
double aligned_shell_integral(const std::function<double(double)>& f,
                              const Spaceform& sf,
                              const std::vector<const std::vector<double>*>&
                                  grids,
                              double a, double b) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a, b};
  for (const auto* g : grids)
    for (double r : *g)
      if (r > a && r < b) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) {
                           return std::fabs(x - y) <= 1e-15 * (b - a);
                         }),
             cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += shell_integral(f, sf, cuts[i], cuts[i + 1]);
  return total;
}

// Integral of u^2 A over one profile cell with u linear: the integrand is
// smooth, so per-cell GL is effectively exact.
double profile_l2_squared(const RadialProfile& u, const Spaceform& sf,
                          double up_to) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < u.grid.size(); ++i) {
    const double a = u.grid[i];
    const double b = std::min(u.grid[i + 1], up_to);
    if (!(b > a)) break;
    total += shell_integral(
        [&](double r) {
          const double v = u.eval(r);
          return v * v;
        },
        sf, a, b);
  }
  return total;
}

}  // namespace

double radial_l2_norm(const RadialProfile& u, const Spaceform& sf) {
  if (u.grid.size() < 2) throw std::domain_error("profile has no support");
  return std::sqrt(
      profile_l2_squared(u, sf, u.grid.back()));
}

FaberKrahnReport faber_krahn_check(double lambda1_omega, double omega_volume,
                                   const Spaceform& sf, double alpha,
                                   double rel_tol) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("alpha must lie in (0, 1]");
  if (!(lambda1_omega > 0.0) || !(omega_volume > 0.0))
    throw std::domain_error("eigenvalue and volume must be positive");
  if (sf.k > 0.0 && omega_volume > 0.5 * total_volume(sf) * (1.0 + 1e-12))
    throw std::domain_error("volume exceeds the hemisphere bound");
  FaberKrahnReport rep;
  rep.ball_radius = radius_for_volume(sf, omega_volume);
  rep.ball_lambda1 = ball_lambda1(sf, rep.ball_radius);
  rep.slack = lambda1_omega - alpha * alpha * rep.ball_lambda1;
  rep.holds = rep.slack >= -rel_tol * lambda1_omega;
  return rep;
}

BallSpectrum comparison_ball(double lambda1_omega, double alpha,
                             const Spaceform& sf, double omega_volume,
                             const ShootingOptions& opts) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("alpha must lie in (0, 1]");
  if (!(lambda1_omega > 0.0))
    throw std::domain_error("eigenvalue must be positive");
  const double target = lambda1_omega / (alpha * alpha);
  const double radius = radius_for_lambda1(sf, target, opts);
  if (omega_volume > 0.0) {
    const double symmetrized = radius_for_volume(sf, omega_volume);
    if (radius > symmetrized * (1.0 + 1e-9))
      throw std::runtime_error(
          "comparison ball is not contained in the symmetrized domain");
  }
  return ball_spectrum(sf, radius, opts);
}

ChitiReport chiti_crossing(const RadialProfile& u1_sym,
                           const BallSpectrum& ball, double band) {
  const double R = ball.R;
  const Spaceform& sf = ball.sf;
  const double norm_u = radial_l2_norm(u1_sym, sf);
  const double norm_z = radial_l2_norm(ball.z, sf);
  if (!(norm_u > 0.0) || !std::isfinite(norm_u) || !(norm_z > 0.0) ||
      !std::isfinite(norm_z))
    throw std::domain_error("profiles must have positive finite norms");

  ChitiReport rep;
  rep.normalization = std::fabs(norm_u / norm_z - 1.0);

  const double z_inf = ball.z.max_abs() / norm_z;
  const double band_abs = band * z_inf;
  const int m = 4096;
  std::vector<double> d(m + 1);
  std::vector<int> sign(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double r = R * i / m;
    d[i] = ball.z.eval(r) / norm_z - u1_sym.eval(r) / norm_u;
    sign[i] = d[i] > band_abs ? 1 : (d[i] < -band_abs ? -1 : 0);
  }

  // run-length pattern over {+,0,-}
  for (int i = 0; i <= m; ++i) {
    const char c = sign[i] > 0 ? '+' : (sign[i] < 0 ? '-' : '0');
    if (rep.sign_pattern.empty() || rep.sign_pattern.back() != c)
      rep.sign_pattern.push_back(c);
  }

  bool any_nonzero = false;
  for (int s : sign) any_nonzero |= s != 0;
  if (!any_nonzero) {
    rep.vacuous = true;
    rep.holds = true;
    rep.r0 = 0.5 * R;
    rep.max_violation = 0.0;
    for (double v : d)
      rep.max_violation = std::max(rep.max_violation, std::fabs(v) / z_inf);
    return rep;
  }

  // Best single split: prefix must be nonnegative, suffix nonpositive.
  // suffix_pos[i] = max over j >= i of d[j] (violation above the split).
  std::vector<double> suffix_pos(m + 2, 0.0);
  for (int i = m; i >= 0; --i)
    suffix_pos[i] = std::max(suffix_pos[i + 1], d[i]);
  double prefix_neg = 0.0;  // max over j <= t of -d[j]
  double best = std::numeric_limits<double>::infinity();
  int best_t = 0;
  for (int t = 0; t <= m; ++t) {
    prefix_neg = std::max(prefix_neg, -d[t]);
    const double viol = std::max(prefix_neg, suffix_pos[t + 1]);
    if (viol < best) {
      best = viol;
      best_t = t;
    }
  }
  rep.max_violation = std::max(best, 0.0) / z_inf;
  rep.holds = rep.max_violation <= band;
  // crossing radius: center of the zero band around the split when one
  // exists, else the split point itself
  int lo = best_t, hi = best_t;
  while (lo > 0 && sign[lo] == 0) --lo;
  while (hi < m && sign[hi + 1] == 0) ++hi;
  rep.r0 = 0.5 * (R * lo / m + R * hi / m);
  if (rep.holds) rep.r0 = std::min(std::max(rep.r0, 1e-12 * R), R);
  return rep;
}

WeightedComparison chiti_weighted(const RadialProfile& u1_sym,
                                  const BallSpectrum& ball,
                                  const RadialProfile& F, Monotone direction,
                                  double rel_tol) {
  if (F.grid.size() < 2 || F.grid.size() != F.values.size())
    throw std::domain_error("malformed weight profile");
  const double f_scale = std::max(F.max_abs(), 1e-300);
  for (size_t i = 0; i + 1 < F.values.size(); ++i) {
    const double step = F.values[i + 1] - F.values[i];
    const bool ok = direction == Monotone::decreasing
                        ? step <= 1e-10 * f_scale
                        : step >= -1e-10 * f_scale;
    if (!ok)
      throw std::domain_error(
          "weight is not monotone in the declared direction");
  }

  const Spaceform& sf = ball.sf;
  const double R = ball.R;
  const double Ru = std::max(u1_sym.grid.back(), R);
  const double norm_u = radial_l2_norm(u1_sym, sf);
  const double norm_z = radial_l2_norm(ball.z, sf);
  if (!(norm_u > 0.0) || !(norm_z > 0.0))
    throw std::domain_error("profiles must have positive norms");

  // F extended as a constant beyond its grid (eval clamps); S u1 can be
  // supported past the ball radius
  auto u2F = [&](double r) {
    const double v = u1_sym.eval(r) / norm_u;
    return v * v * F.eval(r);
  };
  auto z2F = [&](double r) {
    const double v = ball.z.eval(r) / norm_z;
    return v * v * F.eval(r);
  };
  WeightedComparison wc;
  wc.lhs = aligned_shell_integral(u2F, sf, {&u1_sym.grid, &F.grid}, 0.0, Ru);
  wc.rhs = aligned_shell_integral(z2F, sf, {&ball.z.grid, &F.grid}, 0.0, R);
  const double scale = std::max({std::fabs(wc.lhs), std::fabs(wc.rhs), 1e-300});
  wc.holds = direction == Monotone::decreasing
                 ? wc.lhs <= wc.rhs + rel_tol * scale
                 : wc.lhs >= wc.rhs - rel_tol * scale;
  return wc;
}

DifferentialIdentityReport nu_inverse_identity(const BallSpectrum& ball,
                                               double tol) {
  const Spaceform& sf = ball.sf;
  const double R = ball.R;
  const double s_total = ball_volume(sf, R);

  // cumulative int_0^r z A, needed for the right-hand side
  const size_t n = ball.z.grid.size();
  std::vector<double> cum(n, 0.0);
  for (size_t i = 1; i < n; ++i)
    cum[i] = cum[i - 1] +
             shell_integral([&](double r) { return ball.z.eval(r); }, sf,
                            ball.z.grid[i - 1], ball.z.grid[i]);

  auto radius_of = [&](double s) { return radius_for_volume(sf, s); };
  auto nu_inverse = [&](double s) { return ball.z.eval(radius_of(s)); };

  DifferentialIdentityReport rep;
  const int scan = 181;
  const double ds = 0.002 * s_total;
  std::vector<double> lhs(scan), rhs(scan);
  double scale = 0.0;
  for (int j = 0; j < scan; ++j) {
    const double s = s_total * (0.05 + 0.9 * j / (scan - 1));
    const double r = radius_of(s);
    const double area = sphere_area(sf, r);
    lhs[j] = (nu_inverse(s + ds) - nu_inverse(s - ds)) / (2.0 * ds);
    rhs[j] = -ball.lambda1 / (area * area) *
             num::interp_linear(ball.z.grid, cum, r);
    scale = std::max(scale, std::fabs(rhs[j]));
  }
  for (int j = 0; j < scan; ++j)
    rep.max_defect =
        std::max(rep.max_defect, std::fabs(lhs[j] - rhs[j]) / scale);
  rep.holds = rep.max_defect <= tol;
  return rep;
}

OneSidedReport mu_inverse_one_sided(const WeightedSamples& u1,
                                    double lambda1_omega, double alpha,
                                    const Spaceform& sf, double tol,
                                    double delta_frac) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("alpha must lie in (0, 1]");
  const DistributionFunction dist(u1);
  const double s_total = u1.total_measure;
  if (!(s_total > 0.0)) throw std::domain_error("empty sample cloud");

  // exact cumulative integral of the step function mu^{-1}
  const auto& v = dist.values();
  const auto& w = dist.cumulative();
  auto cumulative = [&](double s) {
    double acc = 0.0;
    double prev = 0.0;
    for (size_t j = 0; j < v.size(); ++j) {
      if (s <= w[j]) return acc + v[j] * (s - prev);
      acc += v[j] * (w[j] - prev);
      prev = w[j];
    }
    return acc;  // constant over the slack zone where mu^{-1} = 0
  };

  OneSidedReport rep;
  const double lam = lambda1_omega / (alpha * alpha);
  const double delta = delta_frac * s_total;
  const int scan = 181;
  std::vector<double> defect(scan);
  double scale = 0.0;
  for (int j = 0; j < scan; ++j) {
    const double s = s_total * (0.05 + 0.9 * j / (scan - 1));
    const double diff =
        (dist.inverse(s + delta) - dist.inverse(s - delta)) / (2.0 * delta);
    const double r = radius_for_volume(sf, s);
    const double area = sphere_area(sf, r);
    const double rhs = -lam / (area * area) * cumulative(s);
    defect[j] = rhs - diff;  // positive when the inequality is violated
    scale = std::max(scale, std::fabs(rhs));
  }
  scale = std::max(scale, 1e-300);
  double worst = -std::numeric_limits<double>::infinity();
  for (double dj : defect) worst = std::max(worst, dj / scale);
  rep.worst_defect = worst;
  rep.holds = worst <= tol;
  return rep;
}

}  // namespace sgl
