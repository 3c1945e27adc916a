#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kolmo/covers.hpp"
#include "kolmo/gstrip.hpp"
#include "kolmo/kolmap.hpp"
#include "kolmo/polyfun.hpp"
#include "kolmo/setlib.hpp"

namespace kolmo::io {

using nlohmann::json;

// Function file:
//   {"dim": 2, "name": "fig", "pieces": [{"gradient": [0, 1], "offset": 0}, ...]}
// Doubles are written in shortest round-trip form, so parse(write(f)) == f bitwise.
json func_to_json(const PolyhedralFunc& f, const std::string& name = "");
PolyhedralFunc func_from_json(const json& j);

// Cover file:
//   {"target": "...", "claimed_width_bound": 0.3, "strips": [<function>, ...]}
struct CoverFile {
  std::string target;
  std::vector<GenStrip> strips;
  double claimed_width_bound = 0.0;
};

json cover_to_json(const CoverFile& c);
/// Rejects claimed_width_bound < sum 2 lip(f_i) - 1e-12 with a ParseError.
CoverFile cover_from_json(const json& j);
CoverFile make_cover_file(const CoverResult& r);

json report_to_json(const PipelineReport& r);
json cover_result_to_json(const CoverResult& r);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
json read_json(const std::string& path);
/// Pretty-printed with a trailing newline.
void write_json(const std::string& path, const json& j);

PolyhedralFunc read_func(const std::string& path);
CoverFile read_cover(const std::string& path);

/// Comma-separated coordinates, e.g. "3,0.4".
Point parse_point(const std::string& text);
/// "x0,y0,x1,y1" style: the first half of the numbers is the low corner.
BoundingBox parse_bbox(const std::string& text);

/// Set specifications:
///   square | disk:r=1[,cx=0,cy=0] | polygon:0,0;1,0;0,1 | koch:k=3 |
///   carpet:k=2 | radial:i=0.5-0.6;0.8-0.82[,dim=2] |
///   subgraph:f=sin|parabola|zero[,a=-0.0833,b=0.0833]
SetSpec parse_set_spec(const std::string& text);

/// Built-in scalar fields used by subgraph sets and the surface cover command.
ScalarField builtin_field(const std::string& name, const BoundingBox& W);

}  // namespace kolmo::io
