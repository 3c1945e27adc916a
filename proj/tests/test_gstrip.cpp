#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "kolmo/gstrip.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace kolmo;
using testing_support::figure_func;
using testing_support::in_cube;
using testing_support::random_func;

TEST(GenStrip, WidthBoundIsTwiceLip) {
  const GenStrip s(PolyhedralFunc(2, {0.0, 0.3, 0.4, 0.0}, {0.0, 0.0}));
  EXPECT_DOUBLE_EQ(s.width_bound, 0.8);
  EXPECT_DOUBLE_EQ(gamma_upper_bound(std::vector<GenStrip>{s, s}), 1.6);
}

TEST(GenStrip, ClassicalClosedForm) {
  const ClassicalStrip c = ClassicalStrip::make(Point{0.6, 0.8}, 0.5, 0.4);
  const GenStrip g = from_classical(c);
  EXPECT_NEAR(g.width_bound, 0.4, 1e-15);
  SampleStream s(21);
  for (int i = 0; i < 2000; ++i) {
    const Point x = in_cube(2, 2.0, s);
    if (oracle::slab_boundary_distance(c.normal, c.center, c.width, x) < 1e-9) continue;
    EXPECT_EQ(member(g, x), oracle::slab_contains(c.normal, c.center, c.width, x));
  }
}

TEST(GenStrip, AbsValueStripIsBand) {
  // S(|y| / 2) is the band |y| <= 1/2.
  const GenStrip g(PolyhedralFunc(2, {0.0, 0.5, 0.0, -0.5}, {0.0, 0.0}));
  EXPECT_TRUE(member(g, Point{10.0, 0.49}));
  EXPECT_FALSE(member(g, Point{10.0, 0.51}));
}

TEST(Merge, ContainsUnionAndLipAdds) {
  SampleStream s(22);
  for (int t = 0; t < 20; ++t) {
    const GenStrip a(random_func(2, 2 + s.index(3), 0.3, s));
    const GenStrip b = from_classical(testing_support::random_classical(2, s));
    const GenStrip h = merge(a, b);
    EXPECT_LE(oracle::lip(h.f), oracle::lip(a.f) + oracle::lip(b.f) + 1e-12);
    for (int i = 0; i < 1000; ++i) {
      const Point x = in_cube(2, 2.0, s);
      if (member(a, x) || member(b, x)) EXPECT_TRUE(member(h, x));
    }
  }
}

TEST(Merge, UnprunedHasProductPieces) {
  const GenStrip a(PolyhedralFunc(1, {1.0, -1.0}, {0.0, 0.0}));
  const GenStrip b(PolyhedralFunc(1, {0.5, -0.5, 0.0}, {0.0, 0.0, 0.1}));
  EXPECT_EQ(merge(a, b, {4096, false}).f.size(), 6u);
  EXPECT_THROW(merge(a, b, {5, false}), BudgetError);
}

TEST(Merge, BudgetErrorCarriesMinimum) {
  std::vector<GenStrip> strips;
  for (int k = 0; k < 8; ++k) strips.push_back(from_classical(ClassicalStrip::make(Point{1.0, 0.0}, k, 0.01)));
  try {
    merge_all(strips, 4);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_GT(e.minimum_budget(), 4.0);
  }
}

TEST(Merge, DimensionMismatch) {
  const GenStrip a(PolyhedralFunc(1, {1.0}, {0.0}));
  const GenStrip b(PolyhedralFunc(2, {1.0, 0.0}, {0.0}));
  EXPECT_THROW(merge(a, b), DimensionError);
}

TEST(Prune, KeepsValuesDropsDominated) {
  // The middle piece sits below max(x, -x) everywhere.
  const PolyhedralFunc f(1, {1.0, 0.0, -1.0, 1.0}, {0.0, -1.0, 0.0, -0.5});
  PruneStats st;
  const PolyhedralFunc g = prune(f, &st);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(st.input, 4u);
  SampleStream s(23);
  const PolyhedralFunc r = random_func(3, 30, 1.0, s);
  const PolyhedralFunc rp = prune(r);
  EXPECT_LE(rp.size(), r.size());
  for (int i = 0; i < 2000; ++i) {
    const Point x = in_cube(3, 5.0, s);
    EXPECT_NEAR(oracle::value(rp, x), oracle::value(r, x), 1e-12);
  }
}

TEST(ImageHyperplanes, FigureHasSixLines) {
  const GenStrip g(figure_func());
  const ImageHyperplanes all = image_hyperplanes(g);
  EXPECT_EQ(all.size(), 6u);
  EXPECT_NEAR(all.distance_to_union(Point{3.0, 0.0}), 0.0, 1e-15);
}

namespace {

std::vector<double> horizontal_lines(const ImageHyperplanes& planes) {
  std::vector<double> ys;
  for (const Hyperplane& h : planes.planes) ys.push_back(h.offset / h.normal[1]);
  std::sort(ys.begin(), ys.end());
  return ys;
}

}  // namespace

TEST(ImageHyperplanes, DoubleSlabCoactive) {
  // max(2y - 9, 9, -2y + 11): the kinks are y = 9 and y = 1; y = 5 is never maximal.
  const GenStrip h(PolyhedralFunc(2, {0.0, 2.0, 0.0, 0.0, 0.0, -2.0}, {-9.0, 9.0, 11.0}));
  ImageHyperplaneOptions opt;
  opt.coactive_only = true;
  const auto ys = horizontal_lines(image_hyperplanes(h, opt));
  ASSERT_EQ(ys.size(), 2u);
  EXPECT_NEAR(ys[0], 1.0, 1e-12);
  EXPECT_NEAR(ys[1], 9.0, 1e-12);
  EXPECT_EQ(image_hyperplanes(h).size(), 3u);
}

TEST(ImageHyperplanes, MergedSlabs) {
  // |y - 9| and |y - 1| merge to max(2y - 9, 7, -2y + 11) after pruning.
  const GenStrip a = from_classical(ClassicalStrip::make(Point{0.0, 1.0}, 9.0, 2.0));
  const GenStrip b = from_classical(ClassicalStrip::make(Point{0.0, 1.0}, 1.0, 2.0));
  const GenStrip m = merge(a, b);
  EXPECT_EQ(m.f.size(), 3u);
  ImageHyperplaneOptions opt;
  opt.coactive_only = true;
  const auto ys = horizontal_lines(image_hyperplanes(m, opt));
  ASSERT_EQ(ys.size(), 2u);
  EXPECT_NEAR(ys[0], 2.0, 1e-12);
  EXPECT_NEAR(ys[1], 8.0, 1e-12);
  for (double y : {0.0, 1.0, 2.0, 8.0, 9.0, 10.0}) EXPECT_TRUE(member(m, Point{0.0, y})) << y;
}

TEST(ImageHyperplanes, StripPointsLandOnLines) {
  const PolyhedralFunc f = figure_func();
  const GenStrip g(f);
  const ImageHyperplanes planes = image_hyperplanes(g);
  SampleStream s(24);
  for (int i = 0; i < 3000; ++i) {
    const Point x{s.uniform(-7.0, 8.0), s.uniform(-4.0, 5.0)};
    const ProxResult pr = prox(f, x);
    if (pr.differentiable) continue;
    EXPECT_LE(planes.distance_to_union(pr.y), 1e-9);
    EXPECT_LE(active_pair_residual(f, pr.y), 1e-9);
    EXPECT_LE(support_pair_residual(f, pr), 1e-9);
  }
}

TEST(Coactive, FigurePairs) {
  const PolyhedralFunc f = figure_func();
  EXPECT_TRUE(pieces_coactive(f, 0, 1));
  // y and -2x + y - 4 meet on x = -2 where both are maximal above y = 1.
  EXPECT_TRUE(pieces_coactive(f, 0, 3));
}
