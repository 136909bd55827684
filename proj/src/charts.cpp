#include "sgl/charts.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace sgl {

namespace {

using Cx = std::complex<double>;

Cx cx(Vec2 v) { return {v.x, v.y}; }
Vec2 vec(Cx z) { return {z.real(), z.imag()}; }

void require(bool ok, const char* msg) {
  if (!ok) throw std::domain_error(msg);
}

double curvature_scale(double k) { return std::sqrt(std::fabs(k)); }

// Moebius translation of the conformal chart taking a to the origin; its
// derivative at a is a positive real, so it maps the frame at a to the
// standard frame at the origin without rotation. sign = -1 for the
// hyperbolic disk, +1 for the stereographic sphere chart.
Cx moebius_to_origin(Cx z, Cx a, double sign) {
  return (z - a) / (1.0 + sign * std::conj(a) * z);
}

Cx moebius_from_origin(Cx w, Cx a, double sign) {
  return (w + a) / (1.0 - sign * std::conj(a) * w);
}

}  // namespace

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

std::string chart_name(Chart chart) {
  switch (chart) {
    case Chart::flat: return "flat";
    case Chart::poincare_disk: return "poincare_disk";
    case Chart::stereographic: return "stereographic";
    case Chart::klein: return "klein";
    case Chart::gnomonic: return "gnomonic";
  }
  throw std::logic_error("unknown chart");
}

Chart chart_from_string(const std::string& name) {
  if (name == "flat") return Chart::flat;
  if (name == "poincare_disk") return Chart::poincare_disk;
  if (name == "stereographic") return Chart::stereographic;
  if (name == "klein") return Chart::klein;
  if (name == "gnomonic") return Chart::gnomonic;
  throw std::domain_error("unknown chart name: " + name);
}

bool chart_is_conformal(Chart chart) {
  return chart == Chart::flat || chart == Chart::poincare_disk ||
         chart == Chart::stereographic;
}

Chart conformal_counterpart(Chart chart) {
  if (chart == Chart::klein) return Chart::poincare_disk;
  if (chart == Chart::gnomonic) return Chart::stereographic;
  return chart;
}

Chart affine_counterpart(Chart chart) {
  if (chart == Chart::poincare_disk) return Chart::klein;
  if (chart == Chart::stereographic) return Chart::gnomonic;
  return chart;
}

void validate_chart_point(Chart chart, double k, Vec2 p) {
  require(std::isfinite(p.x) && std::isfinite(p.y),
          "chart point must be finite");
  switch (chart) {
    case Chart::flat:
      require(k == 0.0, "flat chart requires k = 0");
      break;
    case Chart::poincare_disk:
    case Chart::klein:
      require(k < 0.0, "hyperbolic chart requires k < 0");
      require(norm(p) < 1.0, "point outside the unit-disk chart domain");
      break;
    case Chart::stereographic:
      require(k > 0.0, "spherical chart requires k > 0");
      // the chart extends beyond |p| = 1, but all domain machinery
      // (hemisphere condition) restricts to the open unit disk
      break;
    case Chart::gnomonic:
      require(k > 0.0, "spherical chart requires k > 0");
      break;
  }
}

double geodesic_distance(Chart chart, double k, Vec2 a, Vec2 b) {
  validate_chart_point(chart, k, a);
  validate_chart_point(chart, k, b);
  const double c = curvature_scale(k);
  switch (chart) {
    case Chart::flat:
      return norm(b - a);
    case Chart::poincare_disk: {
      const Cx w = moebius_to_origin(cx(b), cx(a), -1.0);
      return (2.0 / c) * std::atanh(std::min(std::abs(w), 1.0 - 1e-16));
    }
    case Chart::stereographic: {
      // tan(c d / 2) = |a - b| / |1 + conj(a) b|, exact incl. the antipode
      const double num = std::abs(cx(a) - cx(b));
      const double den = std::abs(1.0 + std::conj(cx(a)) * cx(b));
      return (2.0 / c) * std::atan2(num, den);
    }
    case Chart::klein: {
      const double q = (1.0 - dot(a, b)) /
                       std::sqrt((1.0 - dot(a, a)) * (1.0 - dot(b, b)));
      return std::acosh(std::max(q, 1.0)) / c;
    }
    case Chart::gnomonic: {
      const double q = (1.0 + dot(a, b)) /
                       std::sqrt((1.0 + dot(a, a)) * (1.0 + dot(b, b)));
      return std::acos(std::clamp(q, -1.0, 1.0)) / c;
    }
  }
  throw std::logic_error("unknown chart");
}

double conformal_factor(Chart chart, double k, Vec2 x) {
  validate_chart_point(chart, k, x);
  const double c = curvature_scale(k);
  switch (chart) {
    case Chart::flat:
      return 1.0;
    case Chart::poincare_disk:
      return 2.0 / (c * (1.0 - dot(x, x)));
    case Chart::stereographic:
      return 2.0 / (c * (1.0 + dot(x, x)));
    default:
      throw std::domain_error("affine charts have no conformal factor");
  }
}

double area_density(Chart chart, double k, Vec2 x) {
  validate_chart_point(chart, k, x);
  const double c = curvature_scale(k);
  const double r2 = dot(x, x);
  switch (chart) {
    case Chart::flat:
      return 1.0;
    case Chart::poincare_disk: {
      const double f = 2.0 / (c * (1.0 - r2));
      return f * f;
    }
    case Chart::stereographic: {
      const double f = 2.0 / (c * (1.0 + r2));
      return f * f;
    }
    case Chart::klein:
      return 1.0 / (c * c * std::pow(1.0 - r2, 1.5));
    case Chart::gnomonic:
      return 1.0 / (c * c * std::pow(1.0 + r2, 1.5));
  }
  throw std::logic_error("unknown chart");
}

Vec2 to_conformal(Chart chart, double k, Vec2 p) {
  validate_chart_point(chart, k, p);
  if (chart == Chart::klein) {
    // |K| = tanh(c r), |P| = tanh(c r / 2)
    return (1.0 / (1.0 + std::sqrt(1.0 - dot(p, p)))) * p;
  }
  if (chart == Chart::gnomonic) {
    // |G| = tan(c r), |S| = tan(c r / 2)
    return (1.0 / (1.0 + std::sqrt(1.0 + dot(p, p)))) * p;
  }
  return p;
}

Vec2 to_affine(Chart chart, double k, Vec2 p) {
  validate_chart_point(chart, k, p);
  if (chart == Chart::poincare_disk)
    return (2.0 / (1.0 + dot(p, p))) * p;
  if (chart == Chart::stereographic) {
    require(norm(p) < 1.0,
            "stereographic point outside the open hemisphere chart range");
    return (2.0 / (1.0 - dot(p, p))) * p;
  }
  return p;
}

Vec2 log_map(Chart chart, double k, Vec2 p, Vec2 x) {
  const Chart cc = conformal_counterpart(chart);
  const Vec2 pc = to_conformal(chart, k, p);
  const Vec2 xc = to_conformal(chart, k, x);
  const double c = curvature_scale(k);
  Cx w;
  double r = 0.0;
  if (cc == Chart::flat) {
    w = cx(xc) - cx(pc);
    r = std::abs(w);
  } else if (cc == Chart::poincare_disk) {
    w = moebius_to_origin(cx(xc), cx(pc), -1.0);
    r = (2.0 / c) * std::atanh(std::min(std::abs(w), 1.0 - 1e-16));
  } else {
    w = moebius_to_origin(cx(xc), cx(pc), +1.0);
    r = (2.0 / c) * std::atan(std::abs(w));
  }
  const double aw = std::abs(w);
  if (aw == 0.0) return {0.0, 0.0};
  return vec((r / aw) * w);
}

Vec2 exp_map(Chart chart, double k, Vec2 p, Vec2 v) {
  const Chart cc = conformal_counterpart(chart);
  const Vec2 pc = to_conformal(chart, k, p);
  const double c = curvature_scale(k);
  const double r = norm(v);
  if (r == 0.0) return p;
  double t = 0.0;  // chart radius from the origin after recentering
  if (cc == Chart::flat) {
    t = r;
  } else if (cc == Chart::poincare_disk) {
    t = std::tanh(0.5 * c * r);
  } else {
    require(c * r < M_PI * (1.0 - 1e-12),
            "exp map reaches past the spherical cut locus");
    t = std::tan(0.5 * c * r);
  }
  const Cx w = (t / r) * cx(v);
  Cx zc;
  if (cc == Chart::flat)
    zc = cx(pc) + w;
  else if (cc == Chart::poincare_disk)
    zc = moebius_from_origin(w, cx(pc), -1.0);
  else
    zc = moebius_from_origin(w, cx(pc), +1.0);
  const Vec2 out = vec(zc);
  if (chart_is_conformal(chart)) return out;
  return to_affine(cc, k, out);
}

}  // namespace sgl
