#include "sgl/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sgl/numerics.hpp"

namespace sgl {
namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::domain_error(msg);
}

void validate_samples(const WeightedSamples& ws) {
  require(ws.total_measure > 0, "total measure must be positive");
  double wsum = 0.0;
  for (const auto& [v, w] : ws.pairs) {
    require(std::isfinite(v) && v >= 0.0, "sample values must be finite and nonnegative");
    require(std::isfinite(w) && w > 0.0, "sample weights must be positive");
    wsum += w;
  }
  require(wsum <= ws.total_measure * (1 + 1e-12) + 1e-12,
          "sample weights exceed the stated total measure");
}

void validate_target(const WeightedSamples& ws, const Spaceform& sf) {
  if (sf.k > 0)
    require(ws.total_measure <= 0.5 * total_volume(sf) * (1 + 1e-12),
            "total measure exceeds the half-space cap for k > 0");
}

// A step function of the measure coordinate s: vals[i] on
// [breaks[i-1] (0 for i = 0), breaks[i]), and 0 from breaks.back() on.
struct MeasureStep {
  std::vector<double> breaks, vals;
};

MeasureStep descending_step(const DistributionFunction& d) {
  return {d.cumulative(), d.values()};
}

// The reflection s -> total - s turns the decreasing rearrangement into the
// increasing one (endpoint conventions differ on a null set only).
MeasureStep reflected_step(const DistributionFunction& d, double total) {
  MeasureStep m;
  const auto& w = d.cumulative();
  const auto& v = d.values();
  const size_t n = v.size();
  if (n == 0) return m;
  const double slack = total - w.back();
  if (slack > 0) {
    m.breaks.push_back(slack);
    m.vals.push_back(0.0);
  }
  for (size_t j = n; j-- > 0;) {
    m.breaks.push_back(total - (j == 0 ? 0.0 : w[j - 1]));
    m.vals.push_back(v[j]);
  }
  return m;
}

double step_product_integral(const MeasureStep& a, const MeasureStep& b) {
  double s = 0.0, acc = 0.0;
  size_t ia = 0, ib = 0;
  while (ia < a.breaks.size() && ib < b.breaks.size()) {
    const double next = std::min(a.breaks[ia], b.breaks[ib]);
    acc += a.vals[ia] * b.vals[ib] * (next - s);
    s = next;
    if (a.breaks[ia] == next) ++ia;
    if (ib < b.breaks.size() && b.breaks[ib] == next) ++ib;
  }
  return acc;
}

// Integral of value^p over a step profile using exact shell volumes.
double shell_power_integral(const StepProfile& sp, const Spaceform& sf,
                            double p) {
  double acc = 0.0, prev_vol = 0.0;
  for (size_t j = 0; j < sp.radii.size(); ++j) {
    const double vol = ball_volume(sf, sp.radii[j]);
    if (sp.values[j] != 0.0) acc += std::pow(sp.values[j], p) * (vol - prev_vol);
    prev_vol = vol;
  }
  return acc;
}

double shell_pair_integral(const StepProfile& a, const StepProfile& b,
                           const Spaceform& sf) {
  std::vector<double> radii;
  radii.reserve(a.radii.size() + b.radii.size());
  radii.insert(radii.end(), a.radii.begin(), a.radii.end());
  radii.insert(radii.end(), b.radii.begin(), b.radii.end());
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  double acc = 0.0, prev_vol = 0.0;
  for (const double r : radii) {
    const double va = a.eval(r), vb = b.eval(r);  // shell value at its top radius
    const double vol = ball_volume(sf, r);
    acc += va * vb * (vol - prev_vol);
    prev_vol = vol;
  }
  return acc;
}

}  // namespace

double WeightedSamples::weight_sum() const {
  double s = 0.0;
  for (const auto& p : pairs) s += p.second;
  return s;
}

double WeightedSamples::slack() const {
  return std::max(0.0, total_measure - weight_sum());
}

double WeightedSamples::max_value() const {
  double m = 0.0;
  for (const auto& p : pairs) m = std::max(m, p.first);
  return m;
}

DistributionFunction::DistributionFunction(const WeightedSamples& ws) {
  validate_samples(ws);
  total_ = ws.total_measure;
  std::vector<std::pair<double, double>> sorted;
  sorted.reserve(ws.pairs.size());
  for (const auto& p : ws.pairs)
    if (p.first > 0.0) sorted.push_back(p);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double cum = 0.0;
  for (const auto& [v, w] : sorted) {
    cum += w;
    if (!v_.empty() && v_.back() == v) {
      w_.back() = cum;  // merge equal levels into one band
    } else {
      v_.push_back(v);
      w_.push_back(cum);
    }
  }
}

double DistributionFunction::mu(double t) const {
  if (t < 0.0) return total_;
  // measure above level t: cumulative weight of values strictly greater
  double acc = 0.0;
  for (size_t j = 0; j < v_.size(); ++j) {
    if (v_[j] > t)
      acc = w_[j];
    else
      break;
  }
  return acc;
}

double DistributionFunction::inverse(double s) const {
  // right-continuous: value j exactly on [w_{j-1}, w_j), zero beyond
  for (size_t j = 0; j < v_.size(); ++j)
    if (s < w_[j]) return v_[j];
  return 0.0;
}

StepProfile decreasing_sym(const WeightedSamples& ws, const Spaceform& sf) {
  validate_target(ws, sf);
  const DistributionFunction d(ws);
  StepProfile sp;
  sp.domain_radius = radius_for_volume(sf, ws.total_measure);
  sp.values = d.values();
  sp.radii.reserve(d.cumulative().size());
  for (const double w : d.cumulative())
    sp.radii.push_back(radius_for_volume(sf, w));
  return sp;
}

StepProfile increasing_sym(const WeightedSamples& ws, const Spaceform& sf) {
  validate_target(ws, sf);
  const DistributionFunction d(ws);
  const auto& v = d.values();
  const auto& w = d.cumulative();
  StepProfile sp;
  sp.domain_radius = radius_for_volume(sf, ws.total_measure);
  if (v.empty()) return sp;
  const double slack = ws.total_measure - w.back();
  if (slack > 0) {
    sp.values.push_back(0.0);
    sp.radii.push_back(radius_for_volume(sf, slack));
  }
  // ascending levels; level j (descending index) fills the band
  // (total - w_j, total - w_{j-1}] in measure coordinates
  for (size_t j = v.size(); j-- > 0;) {
    sp.values.push_back(v[j]);
    const double upper = ws.total_measure - (j == 0 ? 0.0 : w[j - 1]);
    sp.radii.push_back(j == 0 ? sp.domain_radius
                              : radius_for_volume(sf, upper));
  }
  return sp;
}

NormReport check_norms(const WeightedSamples& ws, const Spaceform& sf,
                       const std::vector<double>& exponents) {
  const StepProfile dec = decreasing_sym(ws, sf);
  const StepProfile inc = increasing_sym(ws, sf);
  NormReport rep;
  for (const double p : exponents) {
    require(p > 0, "norm exponents must be positive");
    double base = 0.0;
    for (const auto& [v, wt] : ws.pairs)
      if (v > 0.0) base += std::pow(v, p) * wt;
    const double a = shell_power_integral(dec, sf, p);
    const double b = shell_power_integral(inc, sf, p);
    const double scale = base > 0.0 ? base : 1.0;
    rep.lp_defect = std::max(
        {rep.lp_defect, std::abs(a - base) / scale, std::abs(b - base) / scale});
  }
  const double sup = ws.max_value();
  const double sup_dec = dec.values.empty() ? 0.0 : dec.values.front();
  const double sup_inc = inc.values.empty() ? 0.0 : inc.values.back();
  const double sscale = sup > 0.0 ? sup : 1.0;
  rep.sup_defect = std::max(std::abs(sup_dec - sup), std::abs(sup_inc - sup)) / sscale;
  double support = 0.0;
  for (const auto& [v, wt] : ws.pairs)
    if (v > 0.0) support += wt;
  const double vol = dec.radii.empty() ? 0.0 : ball_volume(sf, dec.support_radius());
  rep.support_defect = std::abs(vol - support) / (support > 0.0 ? support : 1.0);
  return rep;
}

HardyLittlewoodReport check_hardy_littlewood(const WeightedSamples& f,
                                             const WeightedSamples& g,
                                             const Spaceform& sf) {
  require(f.pairs.size() == g.pairs.size(),
          "paired samples need the same cell decomposition");
  require(std::abs(f.total_measure - g.total_measure) <=
              1e-12 * std::max(f.total_measure, g.total_measure),
          "paired samples need the same total measure");
  for (size_t i = 0; i < f.pairs.size(); ++i)
    require(std::abs(f.pairs[i].second - g.pairs[i].second) <=
                1e-12 * std::max(f.pairs[i].second, g.pairs[i].second),
            "paired samples need matching cell weights");
  validate_target(f, sf);

  HardyLittlewoodReport rep;
  for (size_t i = 0; i < f.pairs.size(); ++i)
    rep.middle += f.pairs[i].first * g.pairs[i].first * f.pairs[i].second;
  const DistributionFunction df(f), dg(g);
  rep.upper = step_product_integral(descending_step(df), descending_step(dg));
  rep.lower = step_product_integral(descending_step(df),
                                    reflected_step(dg, g.total_measure));
  // cross-check the measure-coordinate upper integral against the
  // shell-volume form; they agree up to volume-inverse roundoff
  const double shell_upper =
      shell_pair_integral(decreasing_sym(f, sf), decreasing_sym(g, sf), sf);
  if (std::abs(shell_upper - rep.upper) >
      1e-9 * std::max(1.0, std::abs(rep.upper)))
    throw std::runtime_error("shell and measure quadratures disagree");
  return rep;
}

PowerReport check_powers(const WeightedSamples& ws, const Spaceform& sf,
                         double beta) {
  require(beta > 0, "power must be positive");
  WeightedSamples pw = ws;
  for (auto& p : pw.pairs) p.first = std::pow(p.first, beta);
  PowerReport rep;
  const double scale = std::max(1.0, std::pow(ws.max_value(), beta));
  for (const bool increasing : {false, true}) {
    const StepProfile a = increasing ? increasing_sym(pw, sf)
                                     : decreasing_sym(pw, sf);
    const StepProfile b = increasing ? increasing_sym(ws, sf)
                                     : decreasing_sym(ws, sf);
    // compare S(f^beta) with (S f)^beta strictly inside every shell of both
    std::vector<double> radii;
    radii.insert(radii.end(), a.radii.begin(), a.radii.end());
    radii.insert(radii.end(), b.radii.begin(), b.radii.end());
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    double prev = 0.0;
    for (const double r : radii) {
      const double mid = 0.5 * (prev + r);
      const double lhs = a.eval(mid);
      const double rhs = std::pow(b.eval(mid), beta);
      rep.max_defect = std::max(rep.max_defect, std::abs(lhs - rhs) / scale);
      prev = r;
    }
  }
  rep.holds = rep.max_defect <= 1e-12;
  return rep;
}

RadialProfile radial_transfer(const RadialProfile& u,
                              const std::function<double(double)>& m_D,
                              double source_R, const Spaceform& sf,
                              int points) {
  require(source_R > 0, "source radius must be positive");
  require(points >= 2, "transfer grid needs at least two points");
  require(u.grid.size() >= 2, "profile needs at least two samples");
  // the profile must be monotone (either direction) up to roundoff
  double up = 0.0, down = 0.0, mscale = u.max_abs();
  for (size_t i = 0; i + 1 < u.values.size(); ++i) {
    up = std::max(up, u.values[i] - u.values[i + 1]);
    down = std::max(down, u.values[i + 1] - u.values[i]);
  }
  require(std::min(up, down) <= 1e-10 * std::max(mscale, 1.0),
          "transfer needs a monotone radial profile");
  // the source volume function must be increasing
  double prev = m_D(0.0);
  require(std::abs(prev) <= 1e-12, "source volume function must vanish at zero");
  for (int i = 1; i <= 64; ++i) {
    const double cur = m_D(source_R * i / 64.0);
    require(cur > prev, "source volume function must be strictly increasing");
    prev = cur;
  }
  const double total = m_D(source_R);
  validate_target({{}, total}, sf);
  const double R_t = radius_for_volume(sf, total);
  RadialProfile out;
  out.grid.resize(points);
  out.values.resize(points);
  for (int i = 0; i < points; ++i) {
    const double rho = (i == points - 1) ? R_t : R_t * i / (points - 1);
    out.grid[i] = rho;
    double s = (i == points - 1) ? total : ball_volume(sf, rho);
    s = std::min(s, total);
    double r;
    if (i == 0) {
      r = 0.0;
    } else if (i == points - 1) {
      r = source_R;
    } else {
      auto fn = [&](double x) { return m_D(x) - s; };
      r = num::brent(fn, 0.0, source_R, -s, total - s, 1e-14 * source_R);
    }
    out.values[i] = u.eval(r);
  }
  return out;
}

}  // namespace sgl
