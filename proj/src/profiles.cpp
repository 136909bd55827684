#include "sgl/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sgl/numerics.hpp"

namespace sgl {

double RadialProfile::eval(double r) const {
  return num::interp_linear(grid, values, r);
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void RadialProfile::dump_csv(std::ostream& os) const {
  os << "r,value\n";
  char buf[64];
  for (size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", grid[i], values[i]);
    os << buf;
  }
}

double StepProfile::eval(double r) const {
  if (radii.empty() || r > radii.back()) return 0.0;
  const auto it = std::lower_bound(radii.begin(), radii.end(), r);
  return values[static_cast<size_t>(it - radii.begin())];
}

RadialProfile StepProfile::sample(int points, double r_max) const {
  if (r_max < 0.0) r_max = domain_radius > 0.0 ? domain_radius : support_radius();
  RadialProfile p;
  p.grid.resize(points);
  p.values.resize(points);
  for (int i = 0; i < points; ++i) {
    const double r = r_max * i / (points - 1);
    p.grid[i] = r;
    p.values[i] = eval(r);
  }
  return p;
}

}  // namespace sgl
