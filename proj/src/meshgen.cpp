#include "sgl/meshgen.hpp"

#include <cmath>
#include <stdexcept>

namespace sgl {

namespace {

// chart radius of the point at geodesic radius r in the disk's chart
double disk_chart_radius(double k, double r) {
  if (k == 0.0) return r;
  const double c = std::sqrt(std::fabs(k));
  if (k < 0) return std::tanh(0.5 * c * r);
  return std::tan(0.5 * c * r);
}

// stitch two concentric ccw rings (inner ni vertices from index si, outer
// no vertices from so) into ni + no positively oriented triangles by
// advancing whichever ring's next vertex comes first in angle
void stitch_rings(MeshDomain& mesh, int si, int ni, int so, int no) {
  int i = 0, j = 0;
  while (i < ni || j < no) {
    const double a_inner = i < ni ? 2.0 * M_PI * (i + 1) / ni : 1e300;
    const double a_outer = j < no ? 2.0 * M_PI * (j + 1) / no : 1e300;
    if (a_outer <= a_inner) {
      mesh.triangles.push_back(
          {si + i % ni, so + j % no, so + (j + 1) % no});
      ++j;
    } else {
      mesh.triangles.push_back(
          {si + i % ni, so + j % no, si + (i + 1) % ni});
      ++i;
    }
  }
}

// spiderweb disk layout in an abstract parameter disk: returns the mesh
// connectivity with vertices given as (ring fraction s, angle theta)
// mapped through `place`
MeshDomain spiderweb(int rings,
                     const std::function<Vec2(double, double)>& place) {
  if (rings < 1) throw std::domain_error("disk mesh needs at least one ring");
  MeshDomain mesh;
  mesh.vertices.push_back(place(0.0, 0.0));
  std::vector<int> ring_start{0};
  for (int j = 1; j <= rings; ++j) {
    ring_start.push_back(static_cast<int>(mesh.vertices.size()));
    const int nj = 6 * j;
    for (int i = 0; i < nj; ++i)
      mesh.vertices.push_back(
          place(static_cast<double>(j) / rings, 2.0 * M_PI * i / nj));
  }
  for (int i = 0; i < 6; ++i)
    mesh.triangles.push_back({0, 1 + i, 1 + (i + 1) % 6});
  for (int j = 2; j <= rings; ++j)
    stitch_rings(mesh, ring_start[j - 1], 6 * (j - 1), ring_start[j], 6 * j);
  const int nb = 6 * rings;
  mesh.boundary.resize(nb);
  for (int i = 0; i < nb; ++i) mesh.boundary[i] = ring_start[rings] + i;
  return mesh;
}

}  // namespace

MeshDomain make_rectangle(double width, double height, int nx, int ny) {
  if (!(width > 0.0) || !(height > 0.0) || nx < 1 || ny < 1)
    throw std::domain_error("rectangle mesh needs positive size and cells");
  MeshDomain mesh;
  mesh.chart = Chart::flat;
  mesh.k = 0.0;
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.push_back({width * (static_cast<double>(i) / nx - 0.5),
                               height * (static_cast<double>(j) / ny - 0.5)});
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  for (int i = 0; i < nx; ++i) mesh.boundary.push_back(vid(i, 0));
  for (int j = 0; j < ny; ++j) mesh.boundary.push_back(vid(nx, j));
  for (int i = nx; i > 0; --i) mesh.boundary.push_back(vid(i, ny));
  for (int j = ny; j > 0; --j) mesh.boundary.push_back(vid(0, j));
  validate_mesh(mesh);
  return mesh;
}

MeshDomain make_disk(double k, double R, int rings) {
  if (!(R > 0.0)) throw std::domain_error("disk mesh needs positive radius");
  if (k > 0 && !(R < M_PI / std::sqrt(k)))
    throw std::domain_error("spherical disk radius reaches the chart range");
  MeshDomain mesh = spiderweb(rings, [&](double s, double theta) -> Vec2 {
    const double rho = disk_chart_radius(k, s * R);
    return {rho * std::cos(theta), rho * std::sin(theta)};
  });
  mesh.k = k;
  mesh.chart = k == 0.0  ? Chart::flat
               : k < 0.0 ? Chart::poincare_disk
                         : Chart::stereographic;
  validate_mesh(mesh);
  return mesh;
}

MeshDomain make_ellipse(double a, double b, int rings) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("ellipse mesh needs positive semi-axes");
  MeshDomain mesh = spiderweb(rings, [&](double s, double theta) -> Vec2 {
    return {a * s * std::cos(theta), b * s * std::sin(theta)};
  });
  mesh.k = 0.0;
  mesh.chart = Chart::flat;
  validate_mesh(mesh);
  return mesh;
}

MeshDomain make_hyperbolic_polygon(double k, int sides, double circumradius,
                                   int rings) {
  if (!(k < 0.0))
    throw std::domain_error("hyperbolic polygon needs k < 0");
  if (sides < 3) throw std::domain_error("polygon needs at least 3 sides");
  if (!(circumradius > 0.0))
    throw std::domain_error("polygon needs positive circumradius");
  const double c = std::sqrt(-k);
  const double rho_v = std::tanh(c * circumradius);  // klein vertex radius
  const double half = M_PI / sides;
  // polar equation of the regular polygon in the klein chart, where the
  // geodesic edges are straight chords
  auto rho_poly = [&](double theta) {
    double t = std::fmod(theta + half, 2.0 * half);
    if (t < 0) t += 2.0 * half;
    return rho_v * std::cos(half) / std::cos(t - half);
  };
  MeshDomain mesh = spiderweb(rings, [&](double s, double theta) -> Vec2 {
    const Vec2 klein{s * rho_poly(theta) * std::cos(theta),
                     s * rho_poly(theta) * std::sin(theta)};
    return to_conformal(Chart::klein, k, klein);
  });
  mesh.k = k;
  mesh.chart = Chart::poincare_disk;
  validate_mesh(mesh);
  return mesh;
}

}  // namespace sgl
