#include "sgl/mesh_domain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sgl {

namespace {

[[noreturn]] void parse_fail(const std::string& origin, int line,
                             const std::string& what) {
  throw std::runtime_error(origin + ": line " + std::to_string(line) + ": " +
                           what);
}

struct LineReader {
  std::istream& in;
  std::string origin;
  int line = 0;

  std::istringstream next(const char* what) {
    std::string s;
    while (std::getline(in, s)) {
      ++line;
      if (s.find_first_not_of(" \t\r") != std::string::npos)
        return std::istringstream(s);
    }
    parse_fail(origin, line + 1, std::string("unexpected end of file, expected ") + what);
  }
};

double chart_signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * cross(b - a, c - a);
}

// Recenter a point set so that p becomes the chart origin, returning the
// images in the geodesic-affine chart (where geodesics and hence convex
// sets are Euclidean).
std::vector<Vec2> recenter_to_affine(const MeshDomain& mesh,
                                     const std::vector<Vec2>& pts, Vec2 p) {
  std::vector<Vec2> out;
  out.reserve(pts.size());
  const Chart cc = conformal_counterpart(mesh.chart);
  if (cc == Chart::flat) {
    for (Vec2 q : pts) out.push_back(q - p);
    return out;
  }
  const Vec2 pc = to_conformal(mesh.chart, mesh.k, p);
  const std::complex<double> a{pc.x, pc.y};
  const double sign = mesh.k < 0 ? -1.0 : 1.0;
  for (Vec2 q : pts) {
    const Vec2 qc = to_conformal(mesh.chart, mesh.k, q);
    const std::complex<double> z{qc.x, qc.y};
    const std::complex<double> w = (z - a) / (1.0 + sign * std::conj(a) * z);
    out.push_back(to_affine(cc, mesh.k, {w.real(), w.imag()}));
  }
  return out;
}

// Chart radius (in the affine chart) of the geodesic ball of radius r
// around the origin.
double affine_ball_radius(double k, double r) {
  const double c = std::sqrt(std::fabs(k));
  if (k == 0.0) return r;
  if (k < 0) return std::tanh(c * r);
  if (c * r >= 0.5 * M_PI * (1.0 - 1e-12))
    throw std::domain_error("geodesic ball exceeds the gnomonic chart range");
  return std::tan(c * r);
}

// Radial area primitive in the affine chart: G(rho) = integral of
// s * density(s) ds, so that the weighted area of a star-shaped region is
// the boundary integral of G(rho(theta)) d(theta).
double radial_primitive(double k, double rho) {
  if (k == 0.0) return 0.5 * rho * rho;
  if (k < 0) return (1.0 / std::sqrt(1.0 - rho * rho) - 1.0) / (-k);
  return (1.0 - 1.0 / std::sqrt(1.0 + rho * rho)) / k;
}

// Metric area of (convex polygon) ∩ (geodesic ball of chart radius rho_d
// around the origin), both in the affine chart. Green's theorem in polar
// coordinates: each edge contributes the signed integral of
// G(min(rho_edge(theta), rho_d)) d(theta), with G the closed-form radial
// area primitive. Working in the angle variable keeps the integrand
// bounded by G(rho_d) even when the origin sits close to an edge.
double clipped_polygon_area(const std::vector<Vec2>& poly, double k,
                            double rho_d) {
  const int m = static_cast<int>(poly.size());
  const double g_cap = radial_primitive(k, rho_d);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % m];
    const double len = norm(b - a);
    if (len == 0.0) continue;
    const double cr = cross(a, b);
    if (std::fabs(cr) < 1e-15 * len) continue;  // edge line through origin
    const double h = std::fabs(cr) / len;  // distance origin -> edge line
    const double s_foot = -dot(a, b - a) / (len * len);
    const Vec2 foot = a + s_foot * (b - a);
    const Vec2 em = (1.0 / norm(foot)) * foot;
    // angles of the endpoints about the foot direction, both in
    // (-pi/2, pi/2) because every ray in the span meets the segment
    const double ua = std::atan2(cross(em, a), dot(em, a));
    const double ub = std::atan2(cross(em, b), dot(em, b));
    const double sign = ub >= ua ? 1.0 : -1.0;
    double lo = std::min(ua, ub), hi = std::max(ua, ub);
    std::vector<double> cuts{lo, hi};
    if (h < rho_d) {
      const double uc = std::acos(std::min(h / rho_d, 1.0));
      for (double u : {-uc, uc})
        if (u > lo + 1e-15 && u < hi - 1e-15) cuts.push_back(u);
      std::sort(cuts.begin(), cuts.end());
    }
    auto f = [&](double u) {
      const double rho = h / std::cos(u);
      return rho >= rho_d ? g_cap : radial_primitive(k, rho);
    };
    double contrib = 0.0;
    for (size_t j = 0; j + 1 < cuts.size(); ++j)
      contrib += num::gauss_legendre(f, cuts[j], cuts[j + 1], 2);
    total += sign * contrib;
  }
  return total;
}

std::vector<Vec2> boundary_polygon(const MeshDomain& mesh) {
  std::vector<Vec2> poly;
  poly.reserve(mesh.boundary.size());
  for (int idx : mesh.boundary) poly.push_back(mesh.vertices[idx]);
  return poly;
}

}  // namespace

MeshDomain parse_mesh(std::istream& in, const std::string& origin) {
  LineReader rd{in, origin};
  MeshDomain mesh;
  {
    auto ls = rd.next("SGLMESH header");
    std::string magic, chart;
    int version = 0;
    if (!(ls >> magic >> version >> chart >> mesh.k) || magic != "SGLMESH")
      parse_fail(origin, rd.line, "expected 'SGLMESH 1 <chart> <k>' header");
    if (version != 1)
      parse_fail(origin, rd.line, "unsupported SGLMESH version");
    try {
      mesh.chart = chart_from_string(chart);
    } catch (const std::domain_error& e) {
      parse_fail(origin, rd.line, e.what());
    }
  }
  int nv = 0, nt = 0;
  {
    auto ls = rd.next("vertex/triangle counts");
    if (!(ls >> nv >> nt) || nv <= 0 || nt <= 0)
      parse_fail(origin, rd.line, "expected positive vertex and triangle counts");
  }
  mesh.vertices.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    auto ls = rd.next("vertex coordinates");
    Vec2 v;
    if (!(ls >> v.x >> v.y))
      parse_fail(origin, rd.line, "expected two vertex coordinates");
    mesh.vertices.push_back(v);
  }
  mesh.triangles.reserve(nt);
  for (int i = 0; i < nt; ++i) {
    auto ls = rd.next("triangle indices");
    std::array<int, 3> t{};
    if (!(ls >> t[0] >> t[1] >> t[2]))
      parse_fail(origin, rd.line, "expected three vertex indices");
    mesh.triangles.push_back(t);
  }
  {
    auto ls = rd.next("boundary record");
    std::string tag;
    int count = 0;
    if (!(ls >> tag >> count) || tag != "B" || count < 0)
      parse_fail(origin, rd.line, "expected 'B <count>' boundary record");
    mesh.boundary.reserve(count);
    while (static_cast<int>(mesh.boundary.size()) < count) {
      int idx;
      if (ls >> idx) {
        mesh.boundary.push_back(idx);
      } else if (!ls.eof()) {
        parse_fail(origin, rd.line, "malformed boundary index");
      } else {
        ls = rd.next("boundary indices");
      }
    }
  }
  try {
    validate_mesh(mesh);
  } catch (const std::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return mesh;
}

MeshDomain load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  return parse_mesh(in, path);
}

void save_mesh(const MeshDomain& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out.precision(17);
  out << "SGLMESH 1 " << chart_name(mesh.chart) << " " << mesh.k << "\n";
  out << mesh.vertices.size() << " " << mesh.triangles.size() << "\n";
  for (const Vec2& v : mesh.vertices) out << v.x << " " << v.y << "\n";
  for (const auto& t : mesh.triangles)
    out << t[0] << " " << t[1] << " " << t[2] << "\n";
  out << "B " << mesh.boundary.size() << "\n";
  for (size_t i = 0; i < mesh.boundary.size(); ++i)
    out << mesh.boundary[i] << (i + 1 == mesh.boundary.size() ? "\n" : " ");
  if (mesh.boundary.empty()) out << "\n";
}

void validate_mesh(const MeshDomain& mesh) {
  if (mesh.vertices.empty() || mesh.triangles.empty())
    throw std::domain_error("mesh has no vertices or no triangles");
  for (const Vec2& v : mesh.vertices)
    validate_chart_point(mesh.chart, mesh.k, v);
  if (mesh.chart == Chart::stereographic) {
    for (const Vec2& v : mesh.vertices)
      if (norm(v) >= 1.0)
        throw std::domain_error(
            "vertex outside the open hemisphere around the chart center");
  }
  const int nv = static_cast<int>(mesh.vertices.size());
  for (size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int j : mesh.triangles[t])
      if (j < 0 || j >= nv)
        throw std::domain_error("triangle vertex index out of range");
    const double area =
        chart_triangle_area(mesh, static_cast<int>(t));
    if (!(area > 1e-14))
      throw std::domain_error(
          "triangle with non-positive or degenerate chart area");
  }
  for (int idx : mesh.boundary)
    if (idx < 0 || idx >= nv)
      throw std::domain_error("boundary vertex index out of range");
}

double chart_triangle_area(const MeshDomain& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  return chart_signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                           mesh.vertices[tri[2]]);
}

namespace {

// Degree-5 seven-point rule: exact through quintic densities, so the
// adaptive splitter below converges at O(h^6) per level of subdivision.
// The chart area is supplied by the caller so that the four children of a
// midpoint split integrate over exactly one quarter of the parent each;
// recomputing sliver areas from cross products would leave cancellation
// noise in the refinement estimate.
double tri_rule(Chart chart, double k, Vec2 a, Vec2 b, Vec2 c, double area) {
  static const double kSqrt15 = std::sqrt(15.0);
  static const double b1 = (6.0 - kSqrt15) / 21.0;
  static const double b2 = (6.0 + kSqrt15) / 21.0;
  static const double w0 = 9.0 / 40.0;
  static const double w1 = (155.0 - kSqrt15) / 1200.0;
  static const double w2 = (155.0 + kSqrt15) / 1200.0;
  auto bary = [&](double la, double lb, double lc) {
    return Vec2{la * a.x + lb * b.x + lc * c.x,
                la * a.y + lb * b.y + lc * c.y};
  };
  auto rho = [&](Vec2 p) { return area_density(chart, k, p); };
  double s = w0 * rho(bary(1.0 / 3, 1.0 / 3, 1.0 / 3));
  s += w1 * (rho(bary(1 - 2 * b1, b1, b1)) + rho(bary(b1, 1 - 2 * b1, b1)) +
             rho(bary(b1, b1, 1 - 2 * b1)));
  s += w2 * (rho(bary(1 - 2 * b2, b2, b2)) + rho(bary(b2, 1 - 2 * b2, b2)) +
             rho(bary(b2, b2, 1 - 2 * b2)));
  return area * s;
}

double tri_area_adaptive(Chart chart, double k, Vec2 a, Vec2 b, Vec2 c,
                         double area, double whole, double tol, int depth) {
  const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
  const Vec2 cv[4][3] = {
      {a, ab, ca}, {ab, b, bc}, {ca, bc, c}, {ab, bc, ca}};
  const double child_area = 0.25 * area;
  double part[4];
  double sum = 0.0;
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    part[i] = tri_rule(chart, k, cv[i][0], cv[i][1], cv[i][2], child_area);
    sum += part[i];
    scale += std::fabs(part[i]);
  }
  // The floor keeps rounding noise from forcing recursion to the depth cap.
  const double floor_tol = 4e-15 * scale;
  if (depth <= 0 || std::fabs(sum - whole) <= std::max(tol, floor_tol))
    return sum + (sum - whole) / 63.0;
  double out = 0.0;
  for (int i = 0; i < 4; ++i)
    out += tri_area_adaptive(chart, k, cv[i][0], cv[i][1], cv[i][2],
                             child_area, part[i], 0.25 * tol, depth - 1);
  return out;
}

}  // namespace

double metric_triangle_area(const MeshDomain& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Vec2 a = mesh.vertices[tri[0]];
  const Vec2 b = mesh.vertices[tri[1]];
  const Vec2 c = mesh.vertices[tri[2]];
  const double area = chart_signed_area(a, b, c);
  const double whole = tri_rule(mesh.chart, mesh.k, a, b, c, area);
  if (mesh.chart == Chart::flat) return whole;
  const double tol = 1e-13 * std::max(std::fabs(whole), 1e-30);
  return tri_area_adaptive(mesh.chart, mesh.k, a, b, c, area, whole, tol, 12);
}

double domain_volume(const MeshDomain& mesh) {
  double vol = 0.0;
  for (size_t t = 0; t < mesh.triangles.size(); ++t)
    vol += metric_triangle_area(mesh, static_cast<int>(t));
  return vol;
}

double diameter(const MeshDomain& mesh) {
  const std::vector<int>* idx = &mesh.boundary;
  std::vector<int> all;
  if (idx->empty()) {
    all.resize(mesh.vertices.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    idx = &all;
  }
  double best = 0.0;
  for (size_t i = 0; i < idx->size(); ++i)
    for (size_t j = i + 1; j < idx->size(); ++j)
      best = std::max(best,
                      geodesic_distance(mesh.chart, mesh.k,
                                        mesh.vertices[(*idx)[i]],
                                        mesh.vertices[(*idx)[j]]));
  return best;
}

bool point_in_mesh(const MeshDomain& mesh, Vec2 q) {
  for (const auto& tri : mesh.triangles) {
    const Vec2 a = mesh.vertices[tri[0]];
    const Vec2 b = mesh.vertices[tri[1]];
    const Vec2 c = mesh.vertices[tri[2]];
    const double s = chart_signed_area(a, b, c);
    const double tol = -1e-12 * s;
    if (chart_signed_area(a, b, q) >= tol &&
        chart_signed_area(b, c, q) >= tol &&
        chart_signed_area(c, a, q) >= tol)
      return true;
  }
  return false;
}

MeshDomain convex_hull_region(const MeshDomain& mesh, double inj_radius) {
  validate_mesh(mesh);
  const Chart ac = affine_counterpart(mesh.chart);
  std::vector<Vec2> pts;
  pts.reserve(mesh.vertices.size());
  for (const Vec2& v : mesh.vertices) {
    try {
      pts.push_back(to_affine(mesh.chart, mesh.k, v));
    } catch (const std::domain_error&) {
      throw std::domain_error(
          "domain ineligible: vertex outside the open hemisphere");
    }
  }
  // monotone chain; geodesics are straight lines in the affine chart
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Vec2 a, Vec2 b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) throw std::domain_error("hull needs >= 3 distinct points");
  std::vector<Vec2> hull(2 * pts.size());
  size_t h = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (h >= 2 && cross(hull[h - 1] - hull[h - 2], pts[i] - hull[h - 2]) <=
                         1e-14)
      --h;
    hull[h++] = pts[i];
  }
  const size_t lower = h + 1;
  for (size_t i = pts.size() - 1; i-- > 0;) {
    while (h >= lower && cross(hull[h - 1] - hull[h - 2],
                               pts[i] - hull[h - 2]) <= 1e-14)
      --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);  // ccw polygon
  // drop residual near-collinear vertices (relative test) so the fan
  // triangulation below has no degenerate members
  for (bool changed = true; changed && hull.size() > 3;) {
    changed = false;
    for (size_t i = 0; i < hull.size(); ++i) {
      const Vec2 prev = hull[(i + hull.size() - 1) % hull.size()];
      const Vec2 cur = hull[i];
      const Vec2 next = hull[(i + 1) % hull.size()];
      const double c2 = std::fabs(cross(cur - prev, next - cur));
      if (c2 <= 1e-12 * norm(cur - prev) * norm(next - cur)) {
        hull.erase(hull.begin() + i);
        changed = true;
        break;
      }
    }
  }

  MeshDomain region;
  region.chart = ac;
  region.k = mesh.k;
  region.vertices = hull;
  for (size_t i = 1; i + 1 < hull.size(); ++i)
    region.triangles.push_back({0, static_cast<int>(i), static_cast<int>(i + 1)});
  region.boundary.resize(hull.size());
  for (size_t i = 0; i < hull.size(); ++i)
    region.boundary[i] = static_cast<int>(i);
  validate_mesh(region);

  if (mesh.k > 0) {
    const double d = diameter(region);
    const double cap = std::min(0.5 * M_PI / std::sqrt(mesh.k), inj_radius);
    if (!(d < cap))
      throw std::domain_error(
          "domain ineligible: hull diameter reaches the hemisphere cap");
    const double area = domain_volume(region);
    if (!(area < 0.5 * total_volume(Spaceform{2, mesh.k})))
      throw std::domain_error(
          "domain ineligible: hull covers half the sphere or more");
  }
  return region;
}

bool hull_contains(const MeshDomain& hull, Vec2 q, double tol) {
  const auto& b = hull.boundary;
  const size_t m = b.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2 a = hull.vertices[b[i]];
    const Vec2 c = hull.vertices[b[(i + 1) % m]];
    if (cross(c - a, q - a) < -tol * std::max(1.0, norm(c - a))) return false;
  }
  return true;
}

Vec2 project_to_hull(const MeshDomain& hull, Vec2 q) {
  if (hull_contains(hull, q)) return q;
  const auto& b = hull.boundary;
  const size_t m = b.size();
  double best = std::numeric_limits<double>::infinity();
  Vec2 out = q;
  for (size_t i = 0; i < m; ++i) {
    const Vec2 a = hull.vertices[b[i]];
    const Vec2 c = hull.vertices[b[(i + 1) % m]];
    const Vec2 d = c - a;
    const double t =
        std::clamp(dot(q - a, d) / std::max(dot(d, d), 1e-300), 0.0, 1.0);
    const Vec2 cand = a + t * d;
    const Vec2 diff = q - cand;
    const double dist = dot(diff, diff);
    if (dist < best) {
      best = dist;
      out = cand;
    }
  }
  return out;
}

double SigmaProfile::eval(double r) const {
  if (r < 0.0) throw std::domain_error("sigma evaluated at negative radius");
  if (r >= r_max) return sigma.back();
  return spline.eval(r);
}

double SigmaProfile::deriv(double r) const {
  if (r < 0.0) throw std::domain_error("sigma' evaluated at negative radius");
  if (r >= r_max) return 0.0;
  return spline.deriv(r);
}

SigmaProfile sigma_profile(const MeshDomain& hull, Vec2 p,
                           const Spaceform& target, int grid_points) {
  if (target.n != 2)
    throw std::domain_error("sigma target must be a surface (n = 2)");
  const std::vector<Vec2> poly =
      recenter_to_affine(hull, boundary_polygon(hull), p);
  // base point membership: the recentered polygon is geodesically straight
  // in the affine chart, so p in hull means the origin is inside it
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % poly.size()];
    if (cross(b - a, Vec2{0, 0} - a) < -1e-12 * norm(b - a))
      throw std::domain_error("sigma base point outside the hull");
  }
  double r_maxv = 0.0;
  for (const Vec2& v : poly) {
    // distance to origin in the affine chart of curvature k
    double r;
    const double c = std::sqrt(std::fabs(hull.k));
    if (hull.k == 0.0)
      r = norm(v);
    else if (hull.k < 0)
      r = std::atanh(std::min(norm(v), 1.0 - 1e-16)) / c;
    else
      r = std::atan(norm(v)) / c;
    r_maxv = std::max(r_maxv, r);
  }
  SigmaProfile out;
  out.r_max = r_maxv;
  out.grid.resize(grid_points);
  out.sigma.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double r = r_maxv * i / (grid_points - 1);
    out.grid[i] = r;
    if (i == 0) {
      out.sigma[i] = 0.0;
      continue;
    }
    const double vol =
        clipped_polygon_area(poly, hull.k, affine_ball_radius(hull.k, r));
    out.sigma[i] = radius_for_volume(target, std::max(vol, 0.0));
  }
  for (int i = 1; i < grid_points; ++i)
    if (out.sigma[i] < out.sigma[i - 1] - 1e-12 * out.sigma.back())
      throw std::runtime_error("sigma profile lost monotonicity");
  for (int i = 1; i < grid_points; ++i)
    out.sigma[i] = std::max(out.sigma[i], out.sigma[i - 1]);
  out.spline = num::Pchip::fit(out.grid, out.sigma);
  out.dsigma = out.spline.slopes();
  return out;
}

SigmaProfile sigma_profile_radial(const std::function<double(double)>& phi,
                                  double R, const Spaceform& target,
                                  int grid_points) {
  if (!(R > 0.0)) throw std::domain_error("warped hull radius must be positive");
  if (target.n != 2)
    throw std::domain_error("sigma target must be a surface (n = 2)");
  SigmaProfile out;
  out.r_max = R;
  out.grid.resize(grid_points);
  out.sigma.resize(grid_points);
  out.dsigma.resize(grid_points);
  double vol = 0.0;
  out.grid[0] = 0.0;
  out.sigma[0] = 0.0;
  out.exact_slopes = true;
  out.dsigma[0] = 1.0;  // phi(r) ~ r forces sigma'(0) = 1
  for (int i = 1; i < grid_points; ++i) {
    const double r0 = R * (i - 1) / (grid_points - 1);
    const double r1 = R * i / (grid_points - 1);
    vol += 2.0 * M_PI * num::gauss_legendre(phi, r0, r1, 1);
    out.grid[i] = r1;
    out.sigma[i] = radius_for_volume(target, vol);
    out.dsigma[i] = phi(r1) / sn(target.k, out.sigma[i]);
  }
  out.spline = num::Pchip::fit(out.grid, out.sigma);
  return out;
}

double c1_constant(const SigmaProfile& sigma, const Spaceform& target,
                   double r_lo, double r_hi) {
  if (!(r_lo <= r_hi)) throw std::domain_error("empty radius range for C1");
  const double lo = std::max(r_lo, 0.0);
  const double hi = std::min(r_hi, sigma.r_max);
  // Slope and ratio estimates are taken from the profile nodes (tabulated
  // slopes, cell secants, tabulated sigma values).  The monotone cubic's
  // derivative between nodes can legitimately exceed both endpoint slopes
  // near a curvature kink of sigma, which would inflate the constant by
  // O(h) even though the underlying map never does.
  auto slope_at = [&](double r) {
    return num::interp_linear(sigma.grid, sigma.dsigma, r);
  };
  auto ratio_at = [&](double r, double s) {
    if (r < 1e-12) {
      return sigma.grid.size() > 1 && sigma.grid[1] > 0
                 ? sigma.sigma[1] / sigma.grid[1]
                 : slope_at(r);
    }
    return sn(target.k, s) / sn(target.k, r);
  };
  double best = std::max(std::max(slope_at(lo), ratio_at(lo, sigma.eval(lo))),
                         std::max(slope_at(hi), ratio_at(hi, sigma.eval(hi))));
  const size_t m = sigma.grid.size();
  for (size_t i = 0; i < m; ++i) {
    const double r = sigma.grid[i];
    if (r < lo || r > hi) continue;
    best = std::max(best, sigma.dsigma[i]);
    best = std::max(best, ratio_at(r, sigma.sigma[i]));
  }
  for (size_t i = 0; i + 1 < m; ++i) {
    if (sigma.grid[i] >= hi || sigma.grid[i + 1] <= lo) continue;
    if (!(sigma.grid[i + 1] > sigma.grid[i])) continue;
    const double secant = (sigma.sigma[i + 1] - sigma.sigma[i]) /
                          (sigma.grid[i + 1] - sigma.grid[i]);
    best = std::max(best, secant);
  }
  return best;
}

std::pair<double, double> radius_range(const MeshDomain& mesh, Vec2 p) {
  double r_min = std::numeric_limits<double>::infinity();
  double r_max = 0.0;
  for (const Vec2& v : mesh.vertices) {
    const double d = geodesic_distance(mesh.chart, mesh.k, p, v);
    r_min = std::min(r_min, d);
    r_max = std::max(r_max, d);
  }
  if (point_in_mesh(mesh, p)) r_min = 0.0;
  return {r_min, r_max};
}

}  // namespace sgl
