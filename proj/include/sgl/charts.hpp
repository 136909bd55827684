#pragma once

// Planar coordinate charts for the three 2-D model geometries. Two chart
// families per curved sign: conformal (poincare_disk / stereographic), where
// the metric is a scalar multiple of the Euclidean one, and geodesic-affine
// (klein / gnomonic), where geodesics are straight chart lines. All formulas
// are closed-form; log/exp maps route through the conformal chart using
// Moebius recentering.

#include <string>

namespace sgl {

enum class Chart { flat, poincare_disk, stereographic, klein, gnomonic };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

std::string chart_name(Chart chart);
Chart chart_from_string(const std::string& name);
bool chart_is_conformal(Chart chart);
Chart conformal_counterpart(Chart chart);
Chart affine_counterpart(Chart chart);

// Throws std::domain_error if the chart does not fit the curvature sign or
// the point lies outside the chart's domain of definition.
void validate_chart_point(Chart chart, double k, Vec2 p);

// Exact model-space geodesic distance between two chart points.
double geodesic_distance(Chart chart, double k, Vec2 a, Vec2 b);

// Metric scale of a conformal chart at x (length density); throws for the
// affine charts, whose metric is not a scalar multiple of the flat one.
double conformal_factor(Chart chart, double k, Vec2 x);

// Riemannian area element divided by the chart area element at x.
double area_density(Chart chart, double k, Vec2 x);

// Point conversions between the two chart families (identity on flat).
Vec2 to_conformal(Chart chart, double k, Vec2 p);
Vec2 to_affine(Chart chart, double k, Vec2 p);

// Geodesic polar coordinates about p. log_map returns the initial velocity
// of the unit-speed geodesic from p to x, scaled by d(p, x), expressed in a
// fixed orthonormal frame at p (the Moebius-translated chart axes);
// exp_map inverts it and returns a point in the same chart as p.
Vec2 log_map(Chart chart, double k, Vec2 p, Vec2 x);
Vec2 exp_map(Chart chart, double k, Vec2 p, Vec2 v);

}  // namespace sgl
