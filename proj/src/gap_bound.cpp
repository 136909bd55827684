#include "sgl/gap_bound.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "sgl/numerics.hpp"

namespace sgl {

namespace {

// Fixed quadrature cloud for integrals of the form
// integral_Omega u1^2 w(x) dA: the three edge midpoints of every triangle,
// weighted by the metric area element (the same rule the mass matrix uses),
// with u1^2 folded into the weights once.
struct QuadCloud {
  std::vector<Vec2> pts;
  std::vector<double> wu2;
  double total_u2 = 0.0;
};

QuadCloud build_cloud(const MeshDomain& mesh, const std::vector<double>& u1) {
  if (u1.size() != mesh.vertices.size())
    throw std::invalid_argument("u1 must hold one value per mesh vertex");
  QuadCloud c;
  c.pts.reserve(3 * mesh.triangles.size());
  c.wu2.reserve(3 * mesh.triangles.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = std::fabs(chart_triangle_area(mesh, (int)t));
    for (int e = 0; e < 3; ++e) {
      const int i = tri[e];
      const int j = tri[(e + 1) % 3];
      const Vec2 mid = 0.5 * (mesh.vertices[i] + mesh.vertices[j]);
      const double um = 0.5 * (u1[i] + u1[j]);
      const double w = area_density(mesh.chart, mesh.k, mid) * area / 3.0;
      c.pts.push_back(mid);
      c.wu2.push_back(w * um * um);
      c.total_u2 += w * um * um;
    }
  }
  if (!(c.total_u2 > 0.0))
    throw std::invalid_argument("u1 vanishes in quadrature");
  return c;
}

Vec2 balance_field(const MeshDomain& mesh, const QuadCloud& c, Vec2 p,
                   const SigmaProfile& sigma, const RadialProfile& h) {
  Vec2 X{0.0, 0.0};
  for (size_t i = 0; i < c.pts.size(); ++i) {
    const Vec2 v = log_map(mesh.chart, mesh.k, p, c.pts[i]);
    const double r = norm(v);
    if (r < 1e-15) continue;
    const double s = h.eval(sigma.eval(r)) / r;
    X = X + (c.wu2[i] * s) * v;
  }
  return X;
}

// Shell integral over the comparison ball: integral_0^R z^2 w^p dS dr with
// the generalized sphere area, cells cut at every node of both profiles so
// the piecewise-linear integrand stays smooth inside each panel.
double shell_product(const RadialProfile& z, const RadialProfile& w,
                     int w_power, const Spaceform& sf, double R) {
  std::vector<double> cuts{0.0, R};
  for (double g : z.grid)
    if (g > 0.0 && g < R) cuts.push_back(g);
  for (double g : w.grid)
    if (g > 0.0 && g < R) cuts.push_back(g);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) {
                           return std::fabs(a - b) <= 1e-15 * R;
                         }),
             cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += num::gauss_legendre(
        [&](double r) {
          const double zz = z.eval(r);
          double ww = w.eval(r);
          if (w_power == 2) ww *= ww;
          return zz * zz * ww * sphere_area(sf, r);
        },
        cuts[i], cuts[i + 1], 1);
  }
  return total;
}

Vec2 mesh_to_hull(const MeshDomain& mesh, const MeshDomain& hull, Vec2 p) {
  if (hull.chart == mesh.chart) return p;
  return to_affine(mesh.chart, mesh.k, p);
}

Vec2 hull_to_mesh(const MeshDomain& mesh, const MeshDomain& hull, Vec2 q) {
  if (hull.chart == mesh.chart) return q;
  return to_conformal(hull.chart, mesh.k, q);
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

GapBoundReport assemble_report(double lambda1, double lambda2, double alpha,
                               const BallSpectrum& ball, double c1,
                               const CurvaturePair& pair, double diam, int n,
                               double verdict_margin) {
  GapBoundReport rep;
  rep.lambda1 = lambda1;
  rep.lambda2 = lambda2;
  rep.gap = lambda2 - lambda1;
  rep.alpha = alpha;
  rep.ball_radius = ball.R;
  rep.ball_gap = ball.lambda2 - ball.lambda1;
  rep.C1 = c1;
  rep.curvature_const = curvature_constant(n, pair, diam);
  rep.bound_rhs = rep.curvature_const * rep.ball_gap;
  rep.verdict =
      rep.gap <= rep.bound_rhs * (1.0 + verdict_margin) ? "holds" : "violated";
  rep.relative_slack = (rep.bound_rhs - rep.gap) / rep.bound_rhs;
  rep.diameter = diam;
  rep.K_lower = pair.K_lower;
  rep.k_upper = pair.k_upper;
  return rep;
}

}  // namespace

std::vector<Vec2> test_field(const MeshDomain& mesh, Vec2 p,
                             const SigmaProfile& sigma,
                             const RadialProfile& h) {
  std::vector<Vec2> out(mesh.vertices.size(), Vec2{0.0, 0.0});
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const Vec2 v = log_map(mesh.chart, mesh.k, p, mesh.vertices[i]);
    const double r = norm(v);
    if (r < 1e-15) continue;
    out[i] = (h.eval(sigma.eval(r)) / r) * v;
  }
  return out;
}

BalancePoint balance_point(const MeshDomain& mesh, const MeshDomain& hull,
                           const std::vector<double>& u1,
                           const RadialProfile& h, const Spaceform& target,
                           const BalanceOptions& opts) {
  if (hull.vertices.empty())
    throw std::invalid_argument("balance needs a nonempty hull");
  const QuadCloud cloud = build_cloud(mesh, u1);

  // sigma depends on the base point; reuse the nearest computed profile
  // while the iterate moves less than the memo step in the hull chart.
  // Near convergence the reuse radius collapses so the reported residual
  // is evaluated against sigma at the exact final point.
  std::deque<std::pair<Vec2, SigmaProfile>> memo;
  auto sigma_at = [&](Vec2 p_hull, double reuse_step) -> const SigmaProfile& {
    const std::pair<Vec2, SigmaProfile>* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : memo) {
      const double d = norm(e.first - p_hull);
      if (d < best) {
        best = d;
        nearest = &e;
      }
    }
    if (nearest && best <= reuse_step) return nearest->second;
    memo.emplace_back(
        p_hull, sigma_profile(hull, p_hull, target, opts.sigma_grid));
    return memo.back().second;
  };
  auto reuse_radius = [&](double residual) {
    return residual <= 100.0 * opts.tol ? 1e-15 : opts.memo_step;
  };

  Vec2 p_hull{0.0, 0.0};
  for (const Vec2& v : hull.vertices) p_hull = p_hull + v;
  p_hull = (1.0 / (double)hull.vertices.size()) * p_hull;
  Vec2 p = hull_to_mesh(mesh, hull, p_hull);

  Vec2 X = balance_field(mesh, cloud, p, sigma_at(p_hull, 0.0), h);
  double res = norm(X) / cloud.total_u2;
  BalancePoint out;
  out.trace.push_back(res);
  double tau = 1.0;
  int evals = 1;
  bool stalled = false;
  while (true) {
    while (res > opts.tol && evals < opts.max_iterations) {
      const Vec2 step = (tau / cloud.total_u2) * X;
      Vec2 cand;
      bool ok = true;
      try {
        cand = exp_map(mesh.chart, mesh.k, p, step);
      } catch (const std::exception&) {
        ok = false;  // step left the chart; damp and retry
      }
      if (ok) {
        Vec2 cand_hull = mesh_to_hull(mesh, hull, cand);
        if (!hull_contains(hull, cand_hull)) {
          cand_hull = project_to_hull(hull, cand_hull);
          cand = hull_to_mesh(mesh, hull, cand_hull);
        }
        const Vec2 Xc = balance_field(
            mesh, cloud, cand, sigma_at(cand_hull, reuse_radius(res)), h);
        const double resc = norm(Xc) / cloud.total_u2;
        ++evals;
        if (resc < res) {
          p = cand;
          p_hull = cand_hull;
          X = Xc;
          res = resc;
          out.trace.push_back(res);
          tau = std::min(1.0, 1.5 * tau);
          continue;
        }
      }
      tau *= 0.5;
      if (tau < 1e-12) {
        stalled = true;
        break;
      }
    }
    if (res > opts.tol) break;
    // accept only a residual certified against sigma at the exact point
    X = balance_field(mesh, cloud, p, sigma_at(p_hull, 1e-15), h);
    const double exact_res = norm(X) / cloud.total_u2;
    res = exact_res;
    if (exact_res <= opts.tol || evals >= opts.max_iterations || stalled)
      break;
  }
  if (res > opts.tol) {
    std::ostringstream msg;
    msg << (stalled ? "balance iteration stalled"
                    : "balance iteration cap exceeded")
        << " at residual " << res << "; trace tail:";
    const size_t first = out.trace.size() > 8 ? out.trace.size() - 8 : 0;
    for (size_t i = first; i < out.trace.size(); ++i)
      msg << " " << out.trace[i];
    throw std::runtime_error(msg.str());
  }
  out.p = p;
  out.residual = res;
  out.iterations = evals;
  return out;
}

MiddleReport middle_inequality(const MeshDomain& mesh,
                               const std::vector<double>& u1, double gap,
                               Vec2 p, const SigmaProfile& sigma,
                               const GapFactors& factors,
                               const BallSpectrum& ball, double c1,
                               double rel_tol) {
  const QuadCloud cloud = build_cloud(mesh, u1);
  MiddleReport rep;
  rep.chain_certified = factors.certified;
  double rayleigh = 0.0;
  const double k = ball.sf.k;
  for (size_t i = 0; i < cloud.pts.size(); ++i) {
    const double r = geodesic_distance(mesh.chart, mesh.k, p, cloud.pts[i]);
    const double t = sigma.eval(r);
    const double hv = factors.h.eval(t);
    const double Fv = factors.F.eval(t);
    rep.omega_h += cloud.wu2[i] * hv * hv;
    rep.omega_F += cloud.wu2[i] * Fv;
    if (factors.certified) {
      // exact gradient sum of the frame components in constant curvature:
      // g'(r)^2 + g(r)^2 / sn_k(r)^2 with g = h o sigma; h' is recovered
      // from F since h is certified nondecreasing, and vanishes beyond the
      // ball where h is constant.
      double hp2 = 0.0;
      if (t < ball.R) {
        const double snt = sn(k, t);
        hp2 = std::max(Fv - hv * hv / (snt * snt), 0.0);
      }
      const double sp = sigma.deriv(r);
      double term = sp * sp * hp2;
      if (r > 1e-14) {
        const double snr = sn(mesh.k, r);
        term += hv * hv / (snr * snr);
      }
      rayleigh += cloud.wu2[i] * term;
    }
  }
  rep.lhs = gap * rep.omega_h;
  rep.rhs = c1 * c1 * rep.omega_F;
  const double scale = std::max(std::fabs(rep.lhs), std::fabs(rep.rhs));
  rep.holds = rep.lhs <= rep.rhs + rel_tol * scale;

  // The chain compares the two eigenfunctions at equal L^2 mass; rescale the
  // ball side to the mass the quadrature cloud carries.
  const double z_norm = radial_l2_norm(ball.z, ball.sf);
  const double mass_ratio = cloud.total_u2 / (z_norm * z_norm);
  rep.ball_h =
      mass_ratio * shell_product(ball.z, factors.h, 2, ball.sf, ball.R);
  rep.ball_F =
      mass_ratio * shell_product(ball.z, factors.F, 1, ball.sf, ball.R);
  if (factors.certified) {
    const double sh = std::max(rep.omega_h, rep.ball_h);
    const double sF = std::max(rep.omega_F, rep.ball_F);
    rep.chain_holds = rep.omega_h >= rep.ball_h - rel_tol * sh &&
                      rep.omega_F <= rep.ball_F + rel_tol * sF;
    rep.rayleigh_lhs = rayleigh;
    const double sr = std::max(std::fabs(rayleigh), std::fabs(rep.lhs));
    rep.rayleigh_holds = rayleigh >= rep.lhs - rel_tol * sr;
  }
  return rep;
}

GapBoundReport evaluate_bound(const MeshDomain& mesh, double alpha,
                              const CurvaturePair& pair,
                              const GapTolerances& tol) {
  if (!(pair.K_lower <= pair.k_upper))
    throw std::domain_error("curvature window is empty (K_lower > k_upper)");
  if (!(pair.K_lower <= mesh.k && mesh.k <= pair.k_upper))
    throw std::domain_error(
        "curvature witness fails: the chart curvature lies outside the "
        "declared window");
  const EigenResult eig = solve_mesh(mesh);
  const double vol = domain_volume(mesh);
  const Spaceform cmp{2, pair.k_upper};
  const FaberKrahnReport fk =
      faber_krahn_check(eig.lambda1, vol, cmp, alpha);
  if (!fk.holds) {
    std::ostringstream msg;
    msg << "weak Faber-Krahn eligibility fails for alpha = " << alpha
        << ": lambda1 = " << eig.lambda1 << " < alpha^2 lambda1(ball) = "
        << alpha * alpha * fk.ball_lambda1;
    throw std::domain_error(msg.str());
  }
  const BallSpectrum ball =
      comparison_ball(eig.lambda1, alpha, cmp, vol, tol.shooting);
  const GapFactors gf = h_and_F(ball);
  const MeshDomain hull = convex_hull_region(mesh);
  const BalancePoint bp =
      balance_point(mesh, hull, eig.u1, gf.h, cmp, tol.balance);
  const SigmaProfile sp = sigma_profile(
      hull, mesh_to_hull(mesh, hull, bp.p), cmp, tol.balance.sigma_grid);
  const auto [r_lo, r_hi] = radius_range(mesh, bp.p);
  const double c1 = c1_constant(sp, cmp, r_lo, r_hi);
  return assemble_report(eig.lambda1, eig.lambda2, alpha, ball, c1, pair,
                         diameter(mesh), 2, tol.verdict_margin);
}

GapBoundReport evaluate_bound(const MeshDomain& mesh, double alpha,
                              const GapTolerances& tol) {
  return evaluate_bound(mesh, alpha, CurvaturePair{mesh.k, mesh.k}, tol);
}

GapBoundReport evaluate_bound(const WarpedSurface& ws, double R, double alpha,
                              const GapTolerances& tol) {
  if (!(ws.K_lower <= ws.k_upper))
    throw std::domain_error("curvature window is empty (K_lower > k_upper)");
  const WarpedSpectrum spec = warped_disk_spectrum(ws, R);
  double vol = 0.0;
  {
    const int panels = std::max(32, (int)(R * 64));
    vol = 2.0 * M_PI * num::gauss_legendre(ws.phi, 0.0, R, panels);
  }
  const Spaceform cmp{2, ws.k_upper};
  const FaberKrahnReport fk =
      faber_krahn_check(spec.lambda1, vol, cmp, alpha);
  if (!fk.holds) {
    std::ostringstream msg;
    msg << "weak Faber-Krahn eligibility fails for alpha = " << alpha
        << " on the warped disk: lambda1 = " << spec.lambda1
        << " < alpha^2 lambda1(ball) = " << alpha * alpha * fk.ball_lambda1;
    throw std::domain_error(msg.str());
  }
  const BallSpectrum ball =
      comparison_ball(spec.lambda1, alpha, cmp, vol, tol.shooting);
  // The ground state is radial, so the balance field at the pole vanishes
  // by angular parity; the pole is the balance point with zero residual.
  const SigmaProfile sp = sigma_profile_radial(ws.phi, R, cmp);
  const double c1 = c1_constant(sp, cmp, 0.0, R);
  return assemble_report(spec.lambda1, spec.lambda2, alpha, ball, c1,
                         CurvaturePair{ws.K_lower, ws.k_upper}, 2.0 * R, 2,
                         tol.verdict_margin);
}

GapBoundReport ball_sharpness_report(const Spaceform& sf, double R,
                                     const GapTolerances& tol) {
  const BallSpectrum self = ball_spectrum(sf, R, tol.shooting);
  const BallSpectrum ball = comparison_ball(
      self.lambda1, 1.0, sf, ball_volume(sf, R), tol.shooting);
  // sigma for a ball about its center is the identity, so C1 = 1 exactly.
  return assemble_report(self.lambda1, self.lambda2, 1.0, ball, 1.0,
                         CurvaturePair{sf.k, sf.k}, 2.0 * R, sf.n,
                         tol.verdict_margin);
}

double flat_ball_ratio(int n) {
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const BallSpectrum bs = ball_spectrum(Spaceform{n, 0.0}, 1.0);
  const double ratio = bs.lambda2 / bs.lambda1;
  cache.emplace(n, ratio);
  return ratio;
}

HadamardReport hadamard_ratio(const GapBoundReport& report, int n,
                              double rel_tol) {
  if (report.k_upper != 0.0)
    throw std::domain_error(
        "flat-comparison ratio bound needs k_upper = 0");
  HadamardReport out;
  out.ratio = report.lambda2 / report.lambda1;
  const double excess = flat_ball_ratio(n) - 1.0;
  out.ratio_bound =
      report.curvature_const / (report.alpha * report.alpha) * excess;
  out.holds = out.ratio - 1.0 <= out.ratio_bound * (1.0 + rel_tol);
  return out;
}

std::string report_csv_header() {
  return "lambda1,lambda2,gap,alpha,ball_radius,ball_gap,C1,curvature_const,"
         "bound_rhs,verdict,relative_slack,diameter,K_lower,k_upper";
}

std::string report_csv_row(const GapBoundReport& r) {
  std::string row;
  row += format_number(r.lambda1);
  row += ',';
  row += format_number(r.lambda2);
  row += ',';
  row += format_number(r.gap);
  row += ',';
  row += format_number(r.alpha);
  row += ',';
  row += format_number(r.ball_radius);
  row += ',';
  row += format_number(r.ball_gap);
  row += ',';
  row += format_number(r.C1);
  row += ',';
  row += format_number(r.curvature_const);
  row += ',';
  row += format_number(r.bound_rhs);
  row += ',';
  row += r.verdict;
  row += ',';
  row += format_number(r.relative_slack);
  row += ',';
  row += format_number(r.diameter);
  row += ',';
  row += format_number(r.K_lower);
  row += ',';
  row += format_number(r.k_upper);
  return row;
}

std::string report_json(const GapBoundReport& r) {
  std::string j = "{";
  auto field = [&](const char* name, const std::string& value, bool quote) {
    if (j.size() > 1) j += ',';
    j += '"';
    j += name;
    j += "\":";
    if (quote) j += '"';
    j += value;
    if (quote) j += '"';
  };
  field("lambda1", format_number(r.lambda1), false);
  field("lambda2", format_number(r.lambda2), false);
  field("gap", format_number(r.gap), false);
  field("alpha", format_number(r.alpha), false);
  field("ball_radius", format_number(r.ball_radius), false);
  field("ball_gap", format_number(r.ball_gap), false);
  field("C1", format_number(r.C1), false);
  field("curvature_const", format_number(r.curvature_const), false);
  field("bound_rhs", format_number(r.bound_rhs), false);
  field("verdict", r.verdict, true);
  field("relative_slack", format_number(r.relative_slack), false);
  field("diameter", format_number(r.diameter), false);
  field("K_lower", format_number(r.K_lower), false);
  field("k_upper", format_number(r.k_upper), false);
  j += '}';
  return j;
}

}  // namespace sgl
