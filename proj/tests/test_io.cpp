#include <gtest/gtest.h>

#include <regex>

#include "kolmo/io.hpp"
#include "kolmo/svg.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace kolmo;
using io::json;

TEST(FuncJson, RoundTripIsExact) {
  SampleStream s(61);
  for (int t = 0; t < 10; ++t) {
    const PolyhedralFunc f = testing_support::random_func(1 + t % 4, 1 + s.index(12), 1.0, s);
    const PolyhedralFunc g = io::func_from_json(json::parse(io::func_to_json(f, "x").dump()));
    ASSERT_EQ(f.gradients(), g.gradients());
    ASSERT_EQ(f.offsets(), g.offsets());
    for (int i = 0; i < 1000; ++i) {
      const Point x = testing_support::in_cube(f.dim(), 3.0, s);
      ASSERT_EQ(eval(f, x).value, eval(g, x).value);
    }
  }
}

TEST(FuncJson, ParseErrors) {
  EXPECT_THROW(io::func_from_json(json::parse("[]")), ParseError);
  EXPECT_THROW(io::func_from_json(json::parse(R"({"dim": 2, "pieces": []})")), ParseError);
  EXPECT_THROW(io::func_from_json(json::parse(R"({"dim": 2, "pieces": [{"gradient": [1], "offset": 0}]})")), ParseError);
  EXPECT_THROW(io::func_from_json(json::parse(R"({"dim": 1, "pieces": [{"gradient": [1]}]})")), ParseError);
  EXPECT_THROW(io::func_from_json(json::parse(R"({"dim": 9, "pieces": [{"gradient": [1], "offset": 0}]})")), ParseError);
}

TEST(CoverJson, ValidatesClaimedBound) {
  const GenStrip g = from_classical(ClassicalStrip::make(Point{1.0, 0.0}, 0.0, 0.2));
  io::CoverFile cf{"t", {g, g}, 0.4};
  const io::CoverFile back = io::cover_from_json(io::cover_to_json(cf));
  EXPECT_EQ(back.strips.size(), 2u);
  cf.claimed_width_bound = 0.39;
  EXPECT_THROW(io::cover_from_json(io::cover_to_json(cf)), ParseError);
}

TEST(Parsing, PointsBoxesAndSets) {
  EXPECT_EQ(io::parse_point("1, -2.5"), (Point{1.0, -2.5}));
  EXPECT_THROW(io::parse_point("1,x"), ParseError);
  const BoundingBox bb = io::parse_bbox("-7,-4,8,5");
  EXPECT_EQ(bb.low, (Point{-7.0, -4.0}));
  EXPECT_EQ(bb.high, (Point{8.0, 5.0}));
  EXPECT_THROW(io::parse_bbox("1,2,3"), ParseError);
  EXPECT_EQ(io::parse_set_spec("square").name, make_square().name);
  EXPECT_TRUE(io::parse_set_spec("disk:r=2,cx=1").contains(Point{2.9, 0.0}));
  EXPECT_EQ(io::parse_set_spec("carpet:k=1").boundary_planes.size(), make_carpet(1).boundary_planes.size());
  EXPECT_EQ(io::parse_set_spec("radial:i=0.1-0.2;0.5-0.6").radial.size(), 2u);
  EXPECT_TRUE(io::parse_set_spec("polygon:0,0;1,0;0,1").contains(Point{0.2, 0.2}));
  EXPECT_TRUE(io::parse_set_spec("subgraph:f=parabola").graph.has_value());
  EXPECT_THROW(io::parse_set_spec("blob"), ParseError);
  EXPECT_THROW(io::parse_set_spec("koch"), ParseError);
  EXPECT_THROW(io::parse_set_spec("koch:k=1.5"), ParseError);
  EXPECT_THROW(io::builtin_field("cos", BoundingBox::make(Point{0.0}, Point{1.0})), ParseError);
}

TEST(Report, JsonFields) {
  PipelineConfig cfg;
  cfg.displacement_samples = 2000;
  cfg.area_samples = 2000;
  cfg.lipschitz_pairs = 2000;
  const PipelineResult r = run_pipeline(make_square(), cfg);
  const json j = io::report_to_json(r.report);
  for (const char* key : {"set", "strategy", "cover", "merged", "displacement", "lipschitz", "flatten", "measure", "passed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["passed"].get<bool>(), r.report.passed());
  // Same config, same bytes.
  EXPECT_EQ(io::report_to_json(run_pipeline(make_square(), cfg).report).dump(), j.dump());
}

TEST(Svg, FigureRegionsAndDeterminism) {
  const PolyhedralFunc f = testing_support::figure_func();
  const BoundingBox bb = BoundingBox::make(Point{-7.0, -4.0}, Point{8.0, 5.0});
  const RenderResult a = render_strip(f, bb);
  const RenderResult b = render_strip(f, bb);
  EXPECT_EQ(a.svg, b.svg);
  EXPECT_EQ(a.stats.regions, 11u);
  EXPECT_EQ(a.stats.strip_regions, 7u);
  EXPECT_EQ(a.stats.collapse_regions, 2u);
  EXPECT_NE(a.svg.find("<svg"), std::string::npos);
  EXPECT_NE(a.svg.find("version=\"1.1\""), std::string::npos);
  EXPECT_NE(a.svg.find("</svg>"), std::string::npos);
  EXPECT_TRUE(std::regex_search(a.svg, std::regex("<!-- kolmo [0-9.]+ -->")));
}

TEST(Svg, RejectsNonPlanar) {
  const PolyhedralFunc f(3, {1.0, 0.0, 0.0}, {0.0});
  EXPECT_THROW(render_strip(f, BoundingBox::unit(3)), PreconditionError);
}
