#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmo/geom.hpp"

namespace kolmo {

/// Halfspace {x : <normal, x> <= offset} with a unit outward normal.
struct Facet {
  Point normal;
  double offset;
};

/// Counter-clockwise hull vertices, collinear points dropped.
std::vector<Point> convex_hull_2d(std::vector<Point> pts);

/// Facets of conv(pts). 2-D uses the monotone chain; higher dimensions test
/// every d-subset, so keep clouds small there. Throws PreconditionError when
/// the hull is lower-dimensional.
std::vector<Facet> hull_facets(std::span<const Point> pts);

/// Affine rank of the point set.
std::size_t affine_rank(std::span<const Point> pts, double rel_tol = 1e-10);

/// Greedy farthest-point subset whose covering radius over pts is <= radius.
std::vector<std::size_t> greedy_net(std::span<const Point> pts, double radius);

/// Euclidean distance from x to conv(pts) (0 inside).
double distance_to_hull(std::span<const Point> pts, const Point& x);

/// Largest <n_i, x> - b_i over the facets: negative inside, and equal to
/// minus the boundary distance for interior points.
double facet_max(std::span<const Facet> facets, const Point& x);

/// Exact signed distance to a simple closed polygon (negative inside).
double polygon_signed_distance(std::span<const Point> poly, const Point& x);
bool point_in_polygon(std::span<const Point> poly, const Point& x);
double polygon_area(std::span<const Point> poly);
/// Distance from x to the segment [a, b].
double segment_distance(const Point& a, const Point& b, const Point& x);
/// True when two non-adjacent edges intersect.
bool polygon_self_intersects(std::span<const Point> poly);

}  // namespace kolmo
