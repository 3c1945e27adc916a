#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/covers.hpp"
#include "kolmo/geom.hpp"

namespace kolmo {

enum class Membership { outside, boundary, inside };

/// Half-width of the boundary band in set units.
inline constexpr double kBoundaryBand = 1e-9;

/// Bounded target set. Optional fields describe structure a cover strategy
/// can use: hyperplanes containing the boundary, a convex body, radial
/// shells, or a graph chart.
struct SetSpec {
  std::string name;
  std::size_t dim = 2;
  std::function<Membership(const Point&)> membership;
  std::function<std::vector<Point>(std::size_t, SampleStream&)> boundary_sampler;
  BoundingBox bbox;
  std::optional<double> exact_area;
  std::optional<double> perimeter;

  std::vector<Hyperplane> boundary_planes;
  std::optional<ConvexBody> convex;
  std::vector<RadialInterval> radial;
  std::optional<ScalarField> graph;
  std::optional<BoundingBox> graph_domain;

  /// Inside or on the boundary band.
  bool contains(const Point& x) const { return membership(x) != Membership::outside; }
};

SetSpec make_square();
SetSpec make_disk(double r, const Point& center = Point{0.0, 0.0});
/// Simple polygon, either orientation. Throws on fewer than 3 vertices or
/// self-intersection.
SetSpec make_polygon(std::vector<Point> vertices);
/// Depth-k snowflake built on the unit triangle (0,0), (1,0), (1/2, sqrt3/2).
SetSpec make_koch(int depth);
/// Union of the 8^k closed squares of side 3^-k kept by the carpet rule.
SetSpec make_carpet(int depth);
SetSpec make_radial(std::vector<RadialInterval> intervals, std::size_t dim = 2);
/// {(x, y) : x in W, f_min - 1 <= y <= f(x)}. The sampler emits graph
/// points only; the flat sides are listed in boundary_planes.
SetSpec make_subgraph(const ScalarField& f, const BoundingBox& W);

std::vector<Point> koch_vertices(int depth);
/// Area of the depth-k snowflake from the geometric series of added triangles.
double koch_area(int depth);
bool carpet_cell_kept(std::size_t i, std::size_t j, int depth);

struct AreaEstimate {
  double estimate;
  double stderr_;
};

AreaEstimate area_monte_carlo(const SetSpec& A, std::size_t n, SampleStream& stream);

}  // namespace kolmo
