#include "sgl/radial_eig.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgl/numerics.hpp"

namespace sgl {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

// Dormand-Prince 5(4) embedded pair. E = (5th order weights) - (4th order
// weights), so the weighted stage sum with E estimates the local error.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187,
                 A53 = 64448.0 / 6561, A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

// u'' + (n-1)(sn'/sn) u' + (lambda - cmode/sn^2) u = 0 as a first order
// system in (u, v = u'). cmode = l (l + n - 2) is 0 for the radial mode and
// n - 1 for the first angular mode.
struct RadialRhs {
  int n;
  double k, lambda, cmode;
  void operator()(double r, double u, double v, double& du, double& dv) const {
    const double s = sn(k, r);
    const double c = sn_prime(k, r);
    du = v;
    dv = -(n - 1) * (c / s) * v + (cmode / (s * s) - lambda) * u;
  }
};

struct OdeState {
  double r = 0.0, u = 0.0, v = 0.0;
};

// Adaptive integrator for one radial shot. Error control is relative with a
// running-maximum floor per component, so accuracy does not collapse to an
// absolute demand near zeros of u. Sign changes of u at accepted nodes are
// counted; the step cap of a quarter of the shortest oscillation half-period
// guarantees no step spans two zeros.
class Integrator {
 public:
  Integrator(const RadialRhs& rhs, double rtol, double h_max, double uscale0)
      : rhs_(rhs), rtol_(rtol), hmax_(h_max), uscale_(uscale0) {}

  int zeros() const { return zeros_; }

  void advance(OdeState& st, double r_end) {
    if (r_end <= st.r) return;
    double r = st.r, u = st.u, v = st.v;
    double k1u, k1v;
    rhs_(r, u, v, k1u, k1v);
    double h = std::min(hmax_, r_end - r);
    long guard = 0;
    while (r < r_end) {
      if (++guard > 5000000)
        throw std::runtime_error("radial shot exceeded the step budget");
      bool last = false;
      if (r + h >= r_end) {
        h = r_end - r;
        last = true;
      }
      double u2 = u + h * (A21 * k1u);
      double v2 = v + h * (A21 * k1v);
      double k2u, k2v;
      rhs_(r + C2 * h, u2, v2, k2u, k2v);
      double u3 = u + h * (A31 * k1u + A32 * k2u);
      double v3 = v + h * (A31 * k1v + A32 * k2v);
      double k3u, k3v;
      rhs_(r + C3 * h, u3, v3, k3u, k3v);
      double u4 = u + h * (A41 * k1u + A42 * k2u + A43 * k3u);
      double v4 = v + h * (A41 * k1v + A42 * k2v + A43 * k3v);
      double k4u, k4v;
      rhs_(r + C4 * h, u4, v4, k4u, k4v);
      double u5 = u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u);
      double v5 = v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v);
      double k5u, k5v;
      rhs_(r + C5 * h, u5, v5, k5u, k5v);
      double u6 = u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u +
                           A65 * k5u);
      double v6 = v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v +
                           A65 * k5v);
      double k6u, k6v;
      rhs_(r + h, u6, v6, k6u, k6v);
      double un = u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u);
      double vn = v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v);
      double k7u, k7v;
      rhs_(r + h, un, vn, k7u, k7v);
      double eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u +
                       E7 * k7u);
      double ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v +
                       E7 * k7v);
      double su = rtol_ * std::max({std::abs(u), std::abs(un), 0.05 * uscale_});
      double sv = rtol_ * std::max({std::abs(v), std::abs(vn), 0.05 * vscale_});
      double ru = eu / su, rv = ev / sv;
      double err = std::sqrt(0.5 * (ru * ru + rv * rv));
      if (err <= 1.0) {
        r = last ? r_end : r + h;
        if ((u > 0 && un < 0) || (u < 0 && un > 0)) ++zeros_;
        u = un;
        v = vn;
        k1u = k7u;
        k1v = k7v;
        uscale_ = std::max(uscale_, std::abs(u));
        vscale_ = std::max(vscale_, std::abs(v));
      }
      double fac = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
      h *= std::min(5.0, std::max(0.2, fac));
      h = std::min(h, hmax_);
      if (!(h > 0) || r + h == r)
        throw std::runtime_error("radial shot step size underflow");
    }
    st.r = r;
    st.u = u;
    st.v = v;
  }

 private:
  RadialRhs rhs_;
  double rtol_, hmax_;
  double uscale_, vscale_ = 1.0;
  int zeros_ = 0;
};

// Two-term series start at eps = 1e-6 R, from the Frobenius expansion about
// the regular singular point r = 0.
OdeState series_start(const Spaceform& sf, double R, int mode, double lambda) {
  const double eps = 1e-6 * R;
  OdeState st;
  st.r = eps;
  if (mode == 0) {
    st.u = 1.0 - lambda * eps * eps / (2.0 * sf.n);
    st.v = -lambda * eps / sf.n;
  } else {
    const double b =
        (2.0 * (sf.n - 1) * sf.k / 3.0 - lambda) / (2.0 * (sf.n + 2));
    st.u = eps * (1.0 + b * eps * eps);
    st.v = 1.0 + 3.0 * b * eps * eps;
  }
  return st;
}

double step_cap(double R, double lambda, const ShootingOptions& opts) {
  double hmax = R * opts.h_max_fraction;
  if (lambda > 0) hmax = std::min(hmax, 0.25 * kPi / std::sqrt(lambda));
  return hmax;
}

double u_amplitude_guess(double R, int mode, double lambda) {
  if (mode == 0) return 1.0;
  return 0.3 * std::min(R, 1.0 / std::sqrt(std::abs(lambda) + 1.0));
}

struct ShootOut {
  double u = 0.0, v = 0.0;
  int zeros = 0;
};

ShootOut shoot(const Spaceform& sf, double R, int mode, double lambda,
               const ShootingOptions& opts) {
  RadialRhs rhs{sf.n, sf.k, lambda, mode == 0 ? 0.0 : double(sf.n - 1)};
  OdeState st = series_start(sf, R, mode, lambda);
  Integrator ig(rhs, opts.ode_rtol, step_cap(R, lambda, opts),
                u_amplitude_guess(R, mode, lambda));
  ig.advance(st, R);
  return {st.u, st.v, ig.zeros()};
}

void validate_ball(const Spaceform& sf, double R) {
  require(sf.n >= 2, "ball spectra need dimension n >= 2");
  require(R > 0, "ball radius must be positive");
  if (sf.k > 0)
    require(R <= hemisphere_radius(sf.k) * (1 + 1e-9),
            "ball radius beyond the hemisphere for k > 0");
}

// Final pass at a converged eigenvalue: integrate node to node on a uniform
// grid and store both the profile and its derivative.
void profile_pass(const Spaceform& sf, double R, int mode, double lambda,
                  const ShootingOptions& opts, RadialProfile& f,
                  RadialProfile& fp) {
  int N = opts.grid_points;
  if (N < 9) N = 9;
  if (N % 2 == 0) ++N;
  const double h = R / (N - 1);
  f.grid.resize(N);
  f.values.resize(N);
  fp.grid.resize(N);
  fp.values.resize(N);
  f.grid[0] = fp.grid[0] = 0.0;
  f.values[0] = (mode == 0) ? 1.0 : 0.0;
  fp.values[0] = (mode == 0) ? 0.0 : 1.0;
  RadialRhs rhs{sf.n, sf.k, lambda, mode == 0 ? 0.0 : double(sf.n - 1)};
  OdeState st = series_start(sf, R, mode, lambda);
  Integrator ig(rhs, opts.ode_rtol, step_cap(R, lambda, opts),
                u_amplitude_guess(R, mode, lambda));
  for (int i = 1; i < N; ++i) {
    const double target = (i == N - 1) ? R : i * h;
    ig.advance(st, target);
    f.grid[i] = fp.grid[i] = target;
    f.values[i] = st.u;
    fp.values[i] = st.v;
  }
}

// Rayleigh-quotient residual of a stored profile against its eigenvalue.
double rayleigh_residual(const Spaceform& sf, double cmode, double lambda,
                         const RadialProfile& f, const RadialProfile& fp) {
  const int N = static_cast<int>(f.grid.size());
  std::vector<double> num(N, 0.0), den(N, 0.0);
  for (int i = 1; i < N; ++i) {
    const double r = f.grid[i];
    const double s = sn(sf.k, r);
    const double w = std::pow(s, sf.n - 1);
    const double u = f.values[i], v = fp.values[i];
    double q = v * v;
    if (cmode > 0) q += cmode * (u / s) * (u / s);
    num[i] = q * w;
    den[i] = u * u * w;
  }
  const double h = f.grid[1] - f.grid[0];
  const double rq = num::simpson_uniform(num, h) / num::simpson_uniform(den, h);
  return std::abs(rq - lambda) / lambda;
}

}  // namespace

double ball_eigenvalue(const Spaceform& sf, double R, int mode, int index,
                       const ShootingOptions& opts) {
  validate_ball(sf, R);
  require(mode == 0 || mode == 1, "angular mode must be 0 or 1");
  require(index >= 1, "eigenvalue index is 1-based");

  // Oscillation bracketing: the interior zero count of the shot equals the
  // number of eigenvalues below lambda, so bisect the count down to adjacent
  // values and hand the sign change of u(R) to the root finder.
  double lo = 0.0;
  ShootOut slo = shoot(sf, R, mode, lo, opts);
  double hi = std::max(1.0, kPi * kPi * (index + 1.0) * (index + 1.0) / (R * R));
  if (sf.k < 0) hi += 0.25 * (sf.n - 1) * (sf.n - 1) * (-sf.k);
  ShootOut shi = shoot(sf, R, mode, hi, opts);
  int guard = 0;
  while (shi.zeros < index) {
    hi *= 2.0;
    shi = shoot(sf, R, mode, hi, opts);
    if (++guard > 60)
      throw std::runtime_error("eigenvalue bracket did not close");
  }
  guard = 0;
  while (slo.zeros != index - 1 || shi.zeros != index) {
    const double mid = 0.5 * (lo + hi);
    ShootOut smid = shoot(sf, R, mode, mid, opts);
    if (smid.zeros >= index) {
      hi = mid;
      shi = smid;
    } else {
      lo = mid;
      slo = smid;
    }
    if (++guard > 200 || hi - lo <= 1e-15 * hi)
      if (slo.zeros != index - 1 || shi.zeros != index)
        throw std::runtime_error("zero-count bisection stalled");
  }
  const double xtol = opts.lambda_xtol * std::max(1.0, hi);
  auto endpoint = [&](double lam) { return shoot(sf, R, mode, lam, opts).u; };
  return num::brent(endpoint, lo, hi, slo.u, shi.u, xtol);
}

double ball_lambda1(const Spaceform& sf, double R, const ShootingOptions& opts) {
  return ball_eigenvalue(sf, R, 0, 1, opts);
}

BallSpectrum ball_spectrum(const Spaceform& sf, double R,
                           const ShootingOptions& opts) {
  BallSpectrum out;
  out.sf = sf;
  out.R = R;
  out.lambda1 = ball_eigenvalue(sf, R, 0, 1, opts);
  out.lambda2 = ball_eigenvalue(sf, R, 1, 1, opts);
  if (!(out.lambda2 > out.lambda1))
    throw std::runtime_error("ball spectrum lost the gap ordering");
  profile_pass(sf, R, 0, out.lambda1, opts, out.z, out.z_prime);
  profile_pass(sf, R, 1, out.lambda2, opts, out.J, out.J_prime);
  out.z.values.back() = 0.0;  // Dirichlet endpoints, converged to ~1e-12
  out.J.values.back() = 0.0;
  out.residual1 = rayleigh_residual(sf, 0.0, out.lambda1, out.z, out.z_prime);
  out.residual2 = rayleigh_residual(sf, double(sf.n - 1), out.lambda2, out.J,
                                    out.J_prime);
  const auto& z = out.z.values;
  const auto& J = out.J.values;
  const size_t N = z.size();
  for (size_t i = 0; i + 1 < N; ++i) {
    if (z[i] <= 0.0)
      throw std::runtime_error("ground profile lost positivity");
    if (z[i + 1] > z[i] + 1e-10)
      throw std::runtime_error("ground profile lost monotonicity");
    if (i > 0 && J[i] <= 0.0)
      throw std::runtime_error("angular profile lost positivity");
  }
  return out;
}

double radius_for_lambda1(const Spaceform& sf, double target,
                          const ShootingOptions& opts) {
  require(sf.n >= 2, "ball spectra need dimension n >= 2");
  require(target > 0, "target eigenvalue must be positive");
  if (sf.k > 0) {
    const double floor_val = sf.n * sf.k;  // hemisphere ground eigenvalue
    require(target >= floor_val * (1 - 1e-9),
            "target below the hemisphere eigenvalue; no ball attains it");
    if (target <= floor_val * (1 + 1e-9)) return hemisphere_radius(sf.k);
  } else if (sf.k < 0) {
    const double bottom = 0.25 * (sf.n - 1) * (sf.n - 1) * (-sf.k);
    require(target > bottom * (1 + 1e-12),
            "target at or below the large-ball limit; no finite ball attains it");
  }
  auto lam = [&](double R) { return ball_eigenvalue(sf, R, 0, 1, opts); };
  double R_hi = (sf.k > 0) ? hemisphere_radius(sf.k) : 3.0 / std::sqrt(target);
  double f_hi = lam(R_hi) - target;
  int guard = 0;
  while (f_hi > 0) {  // lambda1 decreases in R; grow until at or below target
    R_hi *= 2.0;
    f_hi = lam(R_hi) - target;
    if (++guard > 200)
      throw std::runtime_error("radius bracket did not close from above");
  }
  double R_lo = 0.5 * R_hi;
  double f_lo = lam(R_lo) - target;
  guard = 0;
  while (f_lo <= 0) {
    R_lo *= 0.5;
    f_lo = lam(R_lo) - target;
    if (++guard > 200)
      throw std::runtime_error("radius bracket did not close from below");
  }
  const double R_star = num::brent([&](double R) { return lam(R) - target; },
                                   R_lo, R_hi, f_lo, f_hi, 1e-13 * R_lo);
  if (std::abs(lam(R_star) - target) > 1e-10 * target)
    throw std::runtime_error("radius solve missed the 1e-10 verification");
  return R_star;
}

GapFactors h_and_F(const BallSpectrum& bs, double tol) {
  const int N = static_cast<int>(bs.z.grid.size());
  GapFactors g;
  g.h.grid = bs.z.grid;
  g.F.grid = bs.z.grid;
  g.h.values.resize(N);
  g.F.values.resize(N);
  std::vector<double> hp(N);
  const auto& r = bs.z.grid;
  const auto& z = bs.z.values;
  const auto& zp = bs.z_prime.values;
  const auto& J = bs.J.values;
  const auto& Jp = bs.J_prime.values;
  // h = J / z, with the indeterminate endpoints replaced by their limits:
  // h(0) = 0, h'(0) = J'(0)/z(0), h(R) = J'(R)/z'(R), h'(R) = 0 (the
  // Wronskian-like combination J'z - Jz' vanishes to third order at R).
  g.h.values[0] = 0.0;
  hp[0] = Jp[0] / z[0];
  for (int i = 1; i + 1 < N; ++i) {
    g.h.values[i] = J[i] / z[i];
    hp[i] = (Jp[i] * z[i] - J[i] * zp[i]) / (z[i] * z[i]);
  }
  g.h_limit = Jp[N - 1] / zp[N - 1];
  g.h.values[N - 1] = g.h_limit;
  hp[N - 1] = 0.0;
  const int n = bs.sf.n;
  g.F.values[0] = n * hp[0] * hp[0];
  for (int i = 1; i < N; ++i) {
    const double s = sn(bs.sf.k, r[i]);
    const double ratio = g.h.values[i] / s;
    g.F.values[i] = hp[i] * hp[i] + (n - 1) * ratio * ratio;
  }
  const double hmax = g.h.max_abs();
  const double Fmax = g.F.max_abs();
  double hv = 0.0, Fv = 0.0;
  for (int i = 0; i + 1 < N; ++i) {
    hv = std::max(hv, (g.h.values[i] - g.h.values[i + 1]) / hmax);
    Fv = std::max(Fv, (g.F.values[i + 1] - g.F.values[i]) / Fmax);
  }
  g.h_violation = std::max(0.0, hv);
  g.F_violation = std::max(0.0, Fv);
  g.certified = hv <= tol && Fv <= tol;
  return g;
}

// ---------------------------------------------------------------------------
// Rotationally symmetric disks: one symmetric tridiagonal pencil per Fourier
// mode from piecewise-linear elements on a uniform radial grid.

namespace {

struct Tri {
  std::vector<double> diag, off;
};

struct ModePencil {
  Tri A, B;
  int base = 0;  // global index of the first unknown vertex
};

ModePencil assemble(const WarpedSurface& ws, double R, int mode, int N) {
  const double h = R / N;
  const double s3 = 0.2886751345948129;  // half the Gauss offset, 1/(2 sqrt 3)
  const int base = (mode == 0) ? 0 : 1;
  const int dim = N - base;  // unknown vertices base..N-1, Dirichlet at N
  ModePencil P;
  P.base = base;
  P.A.diag.assign(dim, 0.0);
  P.A.off.assign(dim - 1, 0.0);
  P.B = P.A;
  const double m2 = double(mode) * double(mode);
  for (int e = 0; e < N; ++e) {
    const double r0 = e * h;
    // stiffness weight: the exact integral of phi over the element / h^2
    const double Se = (ws.phi(r0) + 4.0 * ws.phi(r0 + 0.5 * h) +
                       ws.phi(r0 + h)) / (6.0 * h);
    const double g[2] = {r0 + h * (0.5 - s3), r0 + h * (0.5 + s3)};
    const double Nl[2] = {0.5 + s3, 0.5 - s3};  // left shape at the two points
    double M00 = 0, M01 = 0, M11 = 0, V00 = 0, V01 = 0, V11 = 0;
    for (int q = 0; q < 2; ++q) {
      const double w = 0.5 * h;
      const double pg = ws.phi(g[q]);
      const double na = Nl[q], nb = 1.0 - na;
      M00 += w * pg * na * na;
      M01 += w * pg * na * nb;
      M11 += w * pg * nb * nb;
      if (mode > 0) {
        const double c = w * m2 / pg;
        V00 += c * na * na;
        V01 += c * na * nb;
        V11 += c * nb * nb;
      }
    }
    const int ia = e - base, ib = e + 1 - base;
    const bool va = (e >= base);
    const bool vb = (e + 1 <= N - 1);
    if (va) {
      P.A.diag[ia] += Se + V00;
      P.B.diag[ia] += M00;
    }
    if (vb) {
      P.A.diag[ib] += Se + V11;
      P.B.diag[ib] += M11;
    }
    if (va && vb) {
      P.A.off[ia] += -Se + V01;
      P.B.off[ia] += M01;
    }
  }
  return P;
}

// Sylvester inertia count: eigenvalues of (A, B) below sigma equal the
// number of negative pivots in the LDL^T sweep of A - sigma B.
int pencil_count_below(const Tri& A, const Tri& B, double sigma) {
  const int n = static_cast<int>(A.diag.size());
  int count = 0;
  double d = A.diag[0] - sigma * B.diag[0];
  if (std::abs(d) < 1e-280) d = (d < 0) ? -1e-280 : 1e-280;
  if (d < 0) ++count;
  for (int i = 1; i < n; ++i) {
    const double e = A.off[i - 1] - sigma * B.off[i - 1];
    double di = (A.diag[i] - sigma * B.diag[i]) - e * e / d;
    if (std::abs(di) < 1e-280) di = (di < 0) ? -1e-280 : 1e-280;
    if (di < 0) ++count;
    d = di;
  }
  return count;
}

double pencil_eigenvalue(const Tri& A, const Tri& B, int index) {
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (pencil_count_below(A, B, hi) < index) {
    hi *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("pencil eigenvalue bracket did not close");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pencil_count_below(A, B, mid) >= index)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> tri_mul(const Tri& T, const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) {
    double s = T.diag[i] * x[i];
    if (i > 0) s += T.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += T.off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

// Tridiagonal LU with partial pivoting (second superdiagonal fill), plus the
// paired solve. Near-singular pivots are nudged, which is exactly what
// inverse iteration wants.
struct TriLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> swap_next;

  static TriLU factor(const Tri& A, const Tri& B, double shift) {
    const int n = static_cast<int>(A.diag.size());
    TriLU f;
    f.d.resize(n);
    f.dl.assign(std::max(n - 1, 0), 0.0);
    f.du.assign(std::max(n - 1, 0), 0.0);
    f.du2.assign(std::max(n - 2, 0), 0.0);
    f.swap_next.assign(std::max(n - 1, 0), 0);
    for (int i = 0; i < n; ++i) f.d[i] = A.diag[i] - shift * B.diag[i];
    for (int i = 0; i + 1 < n; ++i) {
      f.dl[i] = A.off[i] - shift * B.off[i];
      f.du[i] = f.dl[i];
    }
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(f.d[i]) >= std::abs(f.dl[i])) {
        if (f.d[i] == 0.0) f.d[i] = 1e-300;
        const double fact = f.dl[i] / f.d[i];
        f.dl[i] = fact;
        f.d[i + 1] -= fact * f.du[i];
      } else {
        const double fact = f.d[i] / f.dl[i];
        f.d[i] = f.dl[i];
        f.dl[i] = fact;
        const double tmp = f.du[i];
        f.du[i] = f.d[i + 1];
        f.d[i + 1] = tmp - fact * f.d[i + 1];
        if (i + 2 < n) {
          f.du2[i] = f.du[i + 1];
          f.du[i + 1] = -fact * f.du[i + 1];
        }
        f.swap_next[i] = 1;
      }
    }
    if (f.d[n - 1] == 0.0) f.d[n - 1] = 1e-300;
    return f;
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (swap_next[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

std::vector<double> pencil_eigenvector(const Tri& A, const Tri& B,
                                       double lambda) {
  const int n = static_cast<int>(A.diag.size());
  const double shift = lambda * (1.0 + 1e-10) + 1e-30;
  TriLU lu = TriLU::factor(A, B, shift);
  std::vector<double> x(n, 1.0);
  for (int it = 0; it < 3; ++it) {
    std::vector<double> b = tri_mul(B, x);
    lu.solve(b);
    double m = 0.0;
    int arg = 0;
    for (int i = 0; i < n; ++i)
      if (std::abs(b[i]) > m) {
        m = std::abs(b[i]);
        arg = i;
      }
    const double scale = b[arg];
    for (int i = 0; i < n; ++i) b[i] /= scale;
    x = std::move(b);
  }
  return x;
}

double pencil_residual(const Tri& A, const Tri& B, double lambda,
                       const std::vector<double>& x) {
  std::vector<double> ax = tri_mul(A, x), bx = tri_mul(B, x);
  double rn = 0.0, bn = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double ri = ax[i] - lambda * bx[i];
    rn += ri * ri;
    bn += bx[i] * bx[i];
  }
  return std::sqrt(rn) / (lambda * std::sqrt(bn));
}

void validate_surface(const WarpedSurface& ws, double R) {
  require(bool(ws.phi), "warped surface needs a profile function");
  require(R > 0, "disk radius must be positive");
  require(ws.R_max > 0 && R <= ws.R_max * (1 + 1e-12),
          "disk radius exceeds the declared surface extent");
  require(ws.K_lower <= ws.k_upper, "curvature window is inverted");
  require(std::abs(ws.phi(0.0)) <= 1e-12 * std::max(1.0, R),
          "warping profile must vanish at the pole");
  const double e = 1e-7 * R;
  require(std::abs(ws.phi(e) / e - 1.0) <= 1e-5,
          "warping profile must have unit slope at the pole");
  // Witness check of the declared window against Sect = -phi''/phi.
  const double hfd = 1e-4 * R;
  const double tolK = 1e-3 * std::max({1.0, std::abs(ws.K_lower),
                                       std::abs(ws.k_upper)});
  for (int j = 0; j < 256; ++j) {
    const double r = (j + 0.5) / 256.0 * R;
    if (r < 4.0 * hfd) continue;
    const double p0 = ws.phi(r);
    require(p0 > 0, "warping profile must be positive inside the disk");
    const double sect =
        -(ws.phi(r + hfd) - 2.0 * p0 + ws.phi(r - hfd)) / (hfd * hfd) / p0;
    require(sect >= ws.K_lower - tolK && sect <= ws.k_upper + tolK,
            "warping profile violates the declared curvature window");
  }
}

double grid_eigenvalue(const WarpedSurface& ws, double R, int mode, int index,
                       int N) {
  const ModePencil P = assemble(ws, R, mode, N);
  return pencil_eigenvalue(P.A, P.B, index);
}

}  // namespace

double warped_mode_eigenvalue(const WarpedSurface& ws, double R, int mode,
                              int index, int grid) {
  validate_surface(ws, R);
  require(grid >= 64 && grid % 2 == 0, "grid must be even and at least 64");
  require(mode >= 0, "Fourier mode must be nonnegative");
  require(index >= 1, "eigenvalue index is 1-based");
  const double lN = grid_eigenvalue(ws, R, mode, index, grid);
  const double lH = grid_eigenvalue(ws, R, mode, index, grid / 2);
  return (4.0 * lN - lH) / 3.0;
}

WarpedSpectrum warped_disk_spectrum(const WarpedSurface& ws, double R,
                                    int grid) {
  validate_surface(ws, R);
  require(grid >= 64 && grid % 2 == 0, "grid must be even and at least 64");
  WarpedSpectrum out;
  const ModePencil P0 = assemble(ws, R, 0, grid);
  const ModePencil P0h = assemble(ws, R, 0, grid / 2);
  const ModePencil P1 = assemble(ws, R, 1, grid);
  const ModePencil P1h = assemble(ws, R, 1, grid / 2);
  const double l1N = pencil_eigenvalue(P0.A, P0.B, 1);
  out.lambda1 = (4.0 * l1N - pencil_eigenvalue(P0h.A, P0h.B, 1)) / 3.0;
  // Candidates for the second eigenvalue: the second radial mode and the
  // first mode-1 eigenvalue. Higher Fourier modes only add to the quadratic
  // form, so their first eigenvalues sit above the mode-1 one.
  const double c0 =
      (4.0 * pencil_eigenvalue(P0.A, P0.B, 2) -
       pencil_eigenvalue(P0h.A, P0h.B, 2)) / 3.0;
  const double c1N = pencil_eigenvalue(P1.A, P1.B, 1);
  const double c1 = (4.0 * c1N - pencil_eigenvalue(P1h.A, P1h.B, 1)) / 3.0;
  if (c1 <= c0) {
    out.lambda2 = c1;
    out.lambda2_mode = 1;
    out.lambda2_runner_up = c0;
  } else {
    out.lambda2 = c0;
    out.lambda2_mode = 0;
    out.lambda2_runner_up = c1;
  }
  if (!(out.lambda2 > out.lambda1))
    throw std::runtime_error("warped spectrum lost the gap ordering");

  const std::vector<double> x = pencil_eigenvector(P0.A, P0.B, l1N);
  out.residual = pencil_residual(P0.A, P0.B, l1N, x);
  if (out.lambda2_mode == 1) {
    const std::vector<double> y = pencil_eigenvector(P1.A, P1.B, c1N);
    out.residual = std::max(out.residual, pencil_residual(P1.A, P1.B, c1N, y));
  }

  const double h = R / grid;
  out.u1.grid.resize(grid + 1);
  out.u1.values.resize(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    out.u1.grid[i] = (i == grid) ? R : i * h;
    out.u1.values[i] = (i < grid) ? x[i] : 0.0;
  }
  const double u0 = out.u1.values[0];
  if (!(u0 != 0.0))
    throw std::runtime_error("warped ground state vanished at the pole");
  for (auto& v : out.u1.values) v /= u0;
  const auto& u = out.u1.values;
  for (int i = 0; i + 1 <= grid; ++i) {
    if (i < grid && u[i] <= 0.0)
      throw std::runtime_error("warped ground state lost positivity");
    if (u[i + 1] > u[i] + 1e-9)
      throw std::runtime_error("warped ground state lost monotonicity");
  }
  return out;
}

namespace detail {

double rk_tableau_defect() {
  double m = 0.0;
  auto upd = [&m](double x) { m = std::max(m, std::abs(x)); };
  upd(A21 - C2);
  upd(A31 + A32 - C3);
  upd(A41 + A42 + A43 - C4);
  upd(A51 + A52 + A53 + A54 - C5);
  upd(A61 + A62 + A63 + A64 + A65 - 1.0);
  const double b5[7] = {B1, 0.0, B3, B4, B5, B6, 0.0};
  const double b4[7] = {B1 - E1, 0.0, B3 - E3, B4 - E4, B5 - E5, B6 - E6, -E7};
  const double c[7] = {0.0, C2, C3, C4, C5, 1.0, 1.0};
  for (int p = 0; p <= 4; ++p) {
    double s5 = 0.0, s4 = 0.0;
    for (int i = 0; i < 7; ++i) {
      const double cp = std::pow(c[i], p);
      s5 += b5[i] * cp;
      s4 += b4[i] * cp;
    }
    upd(s5 - 1.0 / (p + 1));
    if (p <= 3) upd(s4 - 1.0 / (p + 1));
  }
  return m;
}

}  // namespace detail

}  // namespace sgl
