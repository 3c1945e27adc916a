#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kolmo/hull.hpp"
#include "kolmo/setlib.hpp"
#include "support/oracles.hpp"

using namespace kolmo;

namespace {

void expect_area(const SetSpec& A, double exact, std::uint64_t seed) {
  SampleStream s(seed);
  const AreaEstimate e = area_monte_carlo(A, 40000, s);
  EXPECT_LE(std::abs(e.estimate - exact), 4.0 * e.stderr_ + 1e-12) << A.name;
}

void expect_boundary_samples_on_boundary(const SetSpec& A, std::size_t n) {
  SampleStream s(41);
  for (const Point& x : A.boundary_sampler(n, s)) EXPECT_EQ(A.membership(x), Membership::boundary) << to_string(x);
}

}  // namespace

TEST(Square, MembershipAndArea) {
  const SetSpec A = make_square();
  EXPECT_EQ(A.membership(Point{0.5, 0.5}), Membership::inside);
  EXPECT_EQ(A.membership(Point{1.0, 0.5}), Membership::boundary);
  EXPECT_EQ(A.membership(Point{1.1, 0.5}), Membership::outside);
  EXPECT_EQ(A.boundary_planes.size(), 4u);
  EXPECT_DOUBLE_EQ(*A.exact_area, 1.0);
  expect_area(A, 1.0, 1);
  expect_boundary_samples_on_boundary(A, 500);
}

TEST(Disk, AreaAndBoundary) {
  const SetSpec A = make_disk(0.5, Point{1.0, 1.0});
  EXPECT_TRUE(A.convex.has_value());
  expect_area(A, std::numbers::pi * 0.25, 2);
  expect_boundary_samples_on_boundary(A, 500);
  EXPECT_THROW(make_disk(-1.0), PreconditionError);
}

TEST(Polygon, ValidationAndConvexity) {
  EXPECT_THROW(make_polygon({{0.0, 0.0}, {1.0, 0.0}}), PreconditionError);
  EXPECT_THROW(make_polygon({{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}}), PreconditionError);
  EXPECT_THROW(make_polygon({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}), PreconditionError);
  const SetSpec L = make_polygon({{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}});
  EXPECT_FALSE(L.convex.has_value());
  expect_area(L, 3.0, 3);
  const SetSpec T = make_polygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  EXPECT_TRUE(T.convex.has_value());
}

TEST(Koch, VerticesAreaAndLines) {
  for (int k = 0; k <= 4; ++k) {
    const auto v = koch_vertices(k);
    EXPECT_EQ(v.size(), 3u * static_cast<std::size_t>(std::pow(4, k)));
    EXPECT_NEAR(std::abs(polygon_area(v)), koch_area(k), 1e-12);
  }
  // Closed form: (sqrt3 / 4) (8/5 - 3/5 (4/9)^k).
  for (int k = 0; k <= 6; ++k) {
    EXPECT_NEAR(koch_area(k), std::sqrt(3.0) / 4.0 * (1.6 - 0.6 * std::pow(4.0 / 9.0, k)), 1e-14);
  }
  const SetSpec A = make_koch(3);
  EXPECT_EQ(A.boundary_planes.size(), 54u);
  expect_area(A, koch_area(3), 4);
  expect_boundary_samples_on_boundary(A, 500);
  EXPECT_THROW(make_koch(-1), PreconditionError);
  EXPECT_THROW(make_koch(9), PreconditionError);
}

TEST(Carpet, CellsAreaAndLines) {
  EXPECT_TRUE(carpet_cell_kept(0, 0, 1));
  EXPECT_FALSE(carpet_cell_kept(1, 1, 1));
  EXPECT_FALSE(carpet_cell_kept(4, 4, 2));
  EXPECT_FALSE(carpet_cell_kept(1, 4, 2));
  std::size_t kept = 0;
  for (std::size_t i = 0; i < 27; ++i) {
    for (std::size_t j = 0; j < 27; ++j) kept += carpet_cell_kept(i, j, 3);
  }
  EXPECT_EQ(kept, 512u);
  const SetSpec A = make_carpet(2);
  EXPECT_EQ(A.boundary_planes.size(), 20u);
  EXPECT_NEAR(*A.exact_area, 64.0 / 81.0, 1e-15);
  expect_area(A, 64.0 / 81.0, 5);
  expect_boundary_samples_on_boundary(A, 500);
  EXPECT_EQ(A.membership(Point{0.5, 0.5}), Membership::outside);
}

TEST(Radial, Shells) {
  const SetSpec A = make_radial({{0.2, 0.4}, {0.6, 0.7}});
  EXPECT_TRUE(A.contains(Point{0.3, 0.0}));
  EXPECT_FALSE(A.contains(Point{0.5, 0.0}));
  expect_area(A, std::numbers::pi * (0.4 * 0.4 - 0.2 * 0.2 + 0.7 * 0.7 - 0.6 * 0.6), 6);
  EXPECT_THROW(make_radial({{0.5, 0.4}}), PreconditionError);
}

TEST(Subgraph, GraphIsBoundary) {
  ScalarField f;
  f.dim = 1;
  f.L = 0.1;
  f.M = 0.1;
  f.value = [](const Point& x) { return std::sin(x[0]) / 10.0; };
  const BoundingBox W = BoundingBox::make(Point{-0.1}, Point{0.1});
  const SetSpec A = make_subgraph(f, W);
  EXPECT_TRUE(A.graph.has_value());
  EXPECT_EQ(A.membership(Point{0.05, f.value(Point{0.05})}), Membership::boundary);
  EXPECT_EQ(A.membership(Point{0.05, f.value(Point{0.05}) - 0.01}), Membership::inside);
  EXPECT_EQ(A.membership(Point{0.05, f.value(Point{0.05}) + 0.01}), Membership::outside);
  expect_boundary_samples_on_boundary(A, 200);
}

TEST(AreaMonteCarlo, NeedsSamples) {
  SampleStream s(7);
  EXPECT_THROW(area_monte_carlo(make_square(), 10, s), PreconditionError);
}
