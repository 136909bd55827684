#include "sgl/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sgl::num {

namespace {

struct Gauss16 {
  std::array<double, 16> node, weight;
  Gauss16() {
    // Nodes are the roots of P_16, found by Newton from the Chebyshev
    // initial guess; weights w = 2 / ((1 - x^2) P'_16(x)^2).
    const int n = 16;
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double p1 = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, pm = 0.0;
        for (int j = 1; j <= n; ++j) {
          double p2 = pm;
          pm = p0;
          p0 = ((2.0 * j - 1.0) * x * pm - (j - 1.0) * p2) / j;
        }
        p1 = n * (x * p0 - pm) / (x * x - 1.0);
        double dx = p0 / p1;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      node[i] = -x;
      node[n - 1 - i] = x;
      double w = 2.0 / ((1.0 - x * x) * p1 * p1);
      weight[i] = w;
      weight[n - 1 - i] = w;
    }
  }
};

const Gauss16& gauss16() {
  static const Gauss16 g;
  return g;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels) {
  if (panels < 1) panels = 1;
  const auto& g = gauss16();
  const double len = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * len;
    const double mid = lo + 0.5 * len;
    const double half = 0.5 * len;
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) acc += g.weight[i] * f(mid + half * g.node[i]);
    total += acc * half;
  }
  return total;
}

int panels_for(double a, double b, double k) {
  const double scale = std::max(1.0, std::sqrt(std::abs(k)));
  const double span = std::abs(b - a) * scale;
  return std::max(1, static_cast<int>(std::ceil(span / 0.5)));
}

double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double xtol, int max_iter) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw std::invalid_argument("brent: no sign change");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * 1e-16 * std::abs(b) + 0.5 * xtol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) < tol || std::abs(fa) <= std::abs(fb)) {
      d = m; e = m;
    } else {
      double p, q, r, s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc; r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = m; e = m;
      }
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

double newton_increasing(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double target,
                         double lo, double hi, double rel_tol, int max_iter) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    const double val = f(x) - target;
    if (val > 0.0) hi = x; else lo = x;
    const double slope = df(x);
    double next = (slope > 0.0) ? x - val / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double dx = std::abs(next - x);
    x = next;
    if (dx <= rel_tol * (std::abs(x) + 1e-300)) break;
  }
  return x;
}

double simpson_uniform(const std::vector<double>& values, double h) {
  const size_t n = values.size();
  if (n < 2) return 0.0;
  size_t m = n;
  double tail = 0.0;
  if (n % 2 == 0) {
    tail = 0.5 * h * (values[n - 2] + values[n - 1]);
    m = n - 1;
  }
  double acc = values[0] + values[m - 1];
  for (size_t i = 1; i + 1 < m; ++i) acc += values[i] * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0 + tail;
}

Pchip Pchip::fit(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pchip: need matching arrays, size >= 2");
  Pchip p;
  const size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    if (h[i] <= 0.0) throw std::invalid_argument("pchip: grid not increasing");
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  std::vector<double> d(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // One-sided three-point endpoint slopes, clipped so interpolation stays
  // monotone on the end intervals.
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) s = 0.0;
    else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) s = 3.0 * d0;
    return s;
  };
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  p.x_ = std::move(x);
  p.y_ = std::move(y);
  p.d_ = std::move(d);
  return p;
}

int Pchip::interval(double r) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), r);
  int i = static_cast<int>(it - x_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
  return i;
}

double Pchip::eval(double r) const {
  if (r <= x_.front()) r = x_.front();
  if (r >= x_.back()) r = x_.back();
  const int i = interval(r);
  const double h = x_[i + 1] - x_[i];
  const double t = (r - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h * h10 * d_[i] + h01 * y_[i + 1] + h * h11 * d_[i + 1];
}

double Pchip::deriv(double r) const {
  if (r <= x_.front()) r = x_.front();
  if (r >= x_.back()) r = x_.back();
  const int i = interval(r);
  const double h = x_[i + 1] - x_[i];
  const double t = (r - x_[i]) / h;
  const double t2 = t * t;
  const double g00 = (6 * t2 - 6 * t) / h, g10 = 3 * t2 - 4 * t + 1;
  const double g01 = (-6 * t2 + 6 * t) / h, g11 = 3 * t2 - 2 * t;
  return g00 * y_[i] + g10 * d_[i] + g01 * y_[i + 1] + g11 * d_[i + 1];
}

double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                     double r) {
  if (r <= x.front()) return y.front();
  if (r >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), r);
  const size_t i = static_cast<size_t>(it - x.begin()) - 1;
  const double t = (r - x[i]) / (x[i + 1] - x[i]);
  return y[i] + t * (y[i + 1] - y[i]);
}

}  // namespace sgl::num
