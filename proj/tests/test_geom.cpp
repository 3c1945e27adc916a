#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "kolmo/geom.hpp"
#include "kolmo/hull.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace kolmo;

TEST(Point, ArithmeticAndNorms) {
  const Point a{3.0, 4.0};
  const Point b{1.0, -1.0};
  EXPECT_DOUBLE_EQ(a.norm(), 5.0);
  EXPECT_EQ(a + b, (Point{4.0, 3.0}));
  EXPECT_EQ(a - b, (Point{2.0, 5.0}));
  EXPECT_EQ(2.0 * b, (Point{2.0, -2.0}));
  EXPECT_DOUBLE_EQ(dot(a, b), -1.0);
  EXPECT_DOUBLE_EQ(distance(a, b), std::hypot(2.0, 5.0));
}

TEST(Point, DimensionMismatchThrows) {
  Point a{1.0, 2.0};
  EXPECT_THROW(a += (Point{1.0, 2.0, 3.0}), DimensionError);
  EXPECT_THROW(dot(a, Point{1.0}), DimensionError);
  EXPECT_THROW(Point(kMaxDim + 1), PreconditionError);
}

TEST(SampleStream, DeterministicAndSplittable) {
  SampleStream a(42);
  SampleStream b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  SampleStream c(42);
  const SampleStream c1 = c.split(1);
  const SampleStream c2 = c.split(2);
  EXPECT_EQ(c.counter(), 0u);
  SampleStream x = c1;
  SampleStream y = c2;
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += x.next_u64() == y.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(SampleStream, UniformAndIndexRanges) {
  SampleStream s(7);
  double sum = 0.0;
  std::set<std::size_t> seen;
  for (int i = 0; i < 20000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    const std::size_t k = s.index(5);
    ASSERT_LT(k, 5u);
    seen.insert(k);
  }
  EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
  EXPECT_EQ(seen.size(), 5u);
}

TEST(BoundingBox, Basics) {
  const BoundingBox bb = BoundingBox::make(Point{-1.0, 0.0}, Point{1.0, 2.0});
  EXPECT_TRUE(bb.contains(Point{0.0, 1.0}));
  EXPECT_FALSE(bb.contains(Point{2.0, 1.0}));
  EXPECT_DOUBLE_EQ(bb.volume(), 4.0);
  EXPECT_DOUBLE_EQ(bb.half_diagonal(), std::sqrt(2.0));
  EXPECT_EQ(bb.corners().size(), 4u);
  EXPECT_THROW(BoundingBox::make(Point{1.0, 0.0}, Point{0.0, 1.0}), PreconditionError);
}

TEST(Hyperplane, NormalizesNormal) {
  const Hyperplane h = Hyperplane::from_unnormalized(Point{0.0, 2.0}, 4.0);
  EXPECT_DOUBLE_EQ(h.normal.norm(), 1.0);
  EXPECT_DOUBLE_EQ(h.signed_distance(Point{5.0, 3.0}), 1.0);
  EXPECT_THROW(Hyperplane::from_unnormalized(Point{0.0, 0.0}, 1.0), PreconditionError);
}

TEST(ClassicalStrip, ValidationAndMembership) {
  EXPECT_THROW(ClassicalStrip::make(Point{1.0, 1.0}, 0.0, 1.0), PreconditionError);
  EXPECT_THROW(ClassicalStrip::make(Point{1.0, 0.0}, 0.0, 0.0), PreconditionError);
  const ClassicalStrip s = ClassicalStrip::make(Point{1.0, 0.0}, 2.0, 1.0);
  EXPECT_TRUE(strip_membership(s, Point{2.5, 7.0}));
  EXPECT_FALSE(strip_membership(s, Point{2.6, 7.0}));
}

TEST(Hull, SquareWithInteriorPoints) {
  std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}, {0.2, 0.7}};
  const auto hull = convex_hull_2d(pts);
  EXPECT_EQ(hull.size(), 4u);
  EXPECT_NEAR(std::abs(polygon_area(hull)), 1.0, 1e-15);
  EXPECT_TRUE(point_in_polygon(hull, Point{0.3, 0.3}));
  EXPECT_FALSE(point_in_polygon(hull, Point{1.3, 0.3}));
  EXPECT_EQ(affine_rank(pts), 2u);
}

TEST(Hull, DistanceMatchesBoxOracle) {
  std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  SampleStream s(3);
  for (int i = 0; i < 500; ++i) {
    const Point x{s.uniform(-2.0, 3.0), s.uniform(-2.0, 3.0)};
    EXPECT_NEAR(distance_to_hull(pts, x), oracle::box_distance(Point{0.0, 0.0}, Point{1.0, 1.0}, x), 1e-12);
  }
}

TEST(Hull, Facets3dCube) {
  std::vector<Point> pts;
  for (int m = 0; m < 8; ++m) pts.push_back(Point{double(m & 1), double((m >> 1) & 1), double((m >> 2) & 1)});
  pts.push_back(Point{0.5, 0.5, 0.5});
  const auto facets = hull_facets(pts);
  SampleStream s(5);
  for (int i = 0; i < 200; ++i) {
    const Point x{s.uniform(-1.0, 2.0), s.uniform(-1.0, 2.0), s.uniform(-1.0, 2.0)};
    const bool inside = oracle::box_distance(Point{0.0, 0.0, 0.0}, Point{1.0, 1.0, 1.0}, x) == 0.0;
    EXPECT_EQ(facet_max(facets, x) <= 1e-12, inside);
  }
}

TEST(Hull, GreedyNetCoversAtRadius) {
  SampleStream s(9);
  std::vector<Point> pts;
  for (int i = 0; i < 2000; ++i) pts.push_back(testing_support::in_cube(2, 1.0, s));
  const double radius = 0.1;
  const auto net = greedy_net(pts, radius);
  ASSERT_FALSE(net.empty());
  for (const Point& p : pts) {
    double best = 1e300;
    for (std::size_t i : net) best = std::min(best, distance(p, pts[i]));
    ASSERT_LE(best, radius);
  }
  for (std::size_t a = 0; a < net.size(); ++a) {
    for (std::size_t b = a + 1; b < net.size(); ++b) ASSERT_GT(distance(pts[net[a]], pts[net[b]]), radius);
  }
}

TEST(Hull, SelfIntersectionDetected) {
  const std::vector<Point> bowtie{{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
  EXPECT_TRUE(polygon_self_intersects(bowtie));
  const std::vector<Point> square{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  EXPECT_FALSE(polygon_self_intersects(square));
  EXPECT_NEAR(polygon_signed_distance(square, Point{0.5, 0.5}), -0.5, 1e-15);
  EXPECT_NEAR(segment_distance(Point{0.0, 0.0}, Point{1.0, 0.0}, Point{2.0, 1.0}), std::sqrt(2.0), 1e-15);
}
