#pragma once

// Built-in domain generators for the verification corpus. All meshes are
// centered at the chart origin and carry ccw boundary loops.

#include "sgl/mesh_domain.hpp"

namespace sgl {

// Axis-aligned w x h rectangle centered at the origin, flat chart,
// nx x ny cells split into two triangles each.
MeshDomain make_rectangle(double width, double height, int nx, int ny);

// Geodesic disk of radius R in curvature k: flat chart for k = 0,
// poincare_disk for k < 0, stereographic for k > 0. Spiderweb layout with
// `rings` concentric rings (ring j holds 6j vertices).
MeshDomain make_disk(double k, double R, int rings);

// Flat ellipse with semi-axes a, b (disk mesh scaled anisotropically).
MeshDomain make_ellipse(double a, double b, int rings);

// Regular geodesic polygon in the hyperbolic plane of curvature k < 0 with
// the given number of sides and geodesic circumradius, poincare_disk chart.
MeshDomain make_hyperbolic_polygon(double k, int sides, double circumradius,
                                   int rings);

}  // namespace sgl
