#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace sgl::num {

/// Composite Gauss-Legendre quadrature of f over [a, b] with the given
/// number of equal panels (16 nodes per panel). Exact for polynomials of
/// degree <= 31 on each panel, which keeps flat-space volume integrals
/// exact to roundoff.
double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int panels = 1);

/// Panel count heuristic for integrands that oscillate or grow on the
/// length scale 1/sqrt(|k|): enough panels that each spans < 0.5 units
/// of arc in the scaled variable.
int panels_for(double a, double b, double k);

/// Brent-Dekker root finder on a bracketing interval [a, b] with
/// f(a) * f(b) <= 0. Converges to |interval| <= xtol + 4 eps |x|.
double brent(const std::function<double(double)>& f, double a, double b,
             double fa, double fb, double xtol, int max_iter = 200);

/// Safeguarded Newton for a strictly increasing function: bisection step
/// whenever the Newton step leaves the bracket. Tolerance is relative on x.
double newton_increasing(const std::function<double(double)>& f,
                         const std::function<double(double)>& df, double target,
                         double lo, double hi, double rel_tol = 1e-13,
                         int max_iter = 120);

/// Composite Simpson on a uniform grid (values.size() odd). Falls back to
/// trapezoid on the final interval when the size is even.
double simpson_uniform(const std::vector<double>& values, double h);

/// Monotone shape-preserving cubic interpolant (Fritsch-Carlson slopes).
/// Never overshoots the data, so monotone inputs give monotone output;
/// deriv() is the exact derivative of the interpolant.
class Pchip {
 public:
  Pchip() = default;
  static Pchip fit(std::vector<double> x, std::vector<double> y);
  double eval(double r) const;
  double deriv(double r) const;
  const std::vector<double>& slopes() const { return d_; }

 private:
  std::vector<double> x_, y_, d_;
  int interval(double r) const;
};

/// Piecewise-linear evaluation on a sorted grid, clamped at the ends.
double interp_linear(const std::vector<double>& x, const std::vector<double>& y,
                     double r);

}  // namespace sgl::num
