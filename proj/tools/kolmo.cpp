#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

#include "kolmo/covers.hpp"
#include "kolmo/errors.hpp"
#include "kolmo/gstrip.hpp"
#include "kolmo/io.hpp"
#include "kolmo/kolmap.hpp"
#include "kolmo/polyfun.hpp"
#include "kolmo/setlib.hpp"
#include "kolmo/svg.hpp"

using namespace kolmo;
using io::json;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
  std::size_t dim = 0;
  Tolerances tol;
};

void emit(const json& j, const std::string& out) {
  if (out.empty()) std::cout << j.dump(2) << "\n";
  else io::write_json(out, j);
}

Point read_x(const std::string& text, const PolyhedralFunc& f, const Common& c) {
  const Point x = io::parse_point(text);
  if (c.dim != 0) require_dim(c.dim, x.dim(), "--x");
  require_dim(f.dim(), x.dim(), "--x");
  return x;
}

json prox_json(const ProxResult& r) {
  return {{"y", std::vector<double>(r.y.coords().begin(), r.y.coords().end())},
          {"active", r.active},
          {"differentiable", r.differentiable},
          {"dual_weights", r.dual_weights},
          {"certificate_residual", r.certificate_residual},
          {"iterations", r.iterations}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized strips, proximal maps and Lipschitz maps onto polyhedra"};
  app.set_version_flag("--version", KOLMO_VERSION);
  app.require_subcommand(1);
  Common c;
  app.fallthrough();
  app.add_option("--seed", c.seed, "Sample stream seed")->capture_default_str();
  app.add_option("--samples", c.samples, "Verification sample count")->capture_default_str();
  app.add_option("--dim", c.dim, "Expected dimension (checked against inputs)");
  app.add_option("--act-tol", c.tol.act_tol, "Relative piece-activity slack")->capture_default_str();
  app.add_option("--grad-tol", c.tol.grad_tol, "Gradient identity tolerance")->capture_default_str();
  app.add_option("--cert-tol", c.tol.cert_tol, "Subgradient certificate tolerance")->capture_default_str();

  std::string func_path, x_text, out_path;

  auto* p_prox = app.add_subcommand("prox", "Proximal point with active set and certificate");
  p_prox->add_option("--func", func_path, "Function file")->required();
  p_prox->add_option("--x", x_text, "Point, comma separated")->required();

  auto* p_member = app.add_subcommand("member", "Membership of x in S(f)");
  p_member->add_option("--func", func_path)->required();
  p_member->add_option("--x", x_text)->required();

  double radius = 0.0;
  std::size_t levels = 6;
  auto* p_oracle = app.add_subcommand("oracle", "Grid-search prox and its distance to the solver");
  p_oracle->add_option("--func", func_path)->required();
  p_oracle->add_option("--x", x_text)->required();
  p_oracle->add_option("--radius", radius, "Grid radius (default lip f)");
  p_oracle->add_option("--levels", levels)->capture_default_str();

  std::vector<std::string> merge_inputs;
  std::size_t cap = 4096;
  auto* p_merge = app.add_subcommand("merge", "Merge strips into one containing their union");
  p_merge->add_option("funcs", merge_inputs, "Function files")->required()->expected(1, -1);
  p_merge->add_option("--cap", cap)->capture_default_str();
  p_merge->add_option("--out", out_path);

  std::string kind, set_text, g_path, h_path, field = "sin", intervals_text;
  double r = 0.1, eps = 0.05, a = -1.0 / 12.0, b = 1.0 / 12.0;
  auto* p_cover = app.add_subcommand("cover", "Build a verified cover");
  p_cover->add_option("kind", kind, "convex | dc | surface | radial")->required()
      ->check(CLI::IsMember({"convex", "dc", "surface", "radial"}));
  p_cover->add_option("--set", set_text, "Convex set for 'convex'");
  p_cover->add_option("--r", r)->capture_default_str();
  p_cover->add_option("--eps", eps)->capture_default_str();
  p_cover->add_option("--gfunc", g_path, "Function file for 'dc'");
  p_cover->add_option("--hfunc", h_path, "Function file for 'dc'");
  p_cover->add_option("--field", field, "sin | parabola | zero for 'surface'")->capture_default_str();
  p_cover->add_option("--a", a)->capture_default_str();
  p_cover->add_option("--b", b)->capture_default_str();
  p_cover->add_option("--intervals", intervals_text, "lo-hi;lo-hi for 'radial'");
  p_cover->add_option("--out", out_path);

  std::string strategy = "auto", report_path, svg_path, cover_path;
  std::size_t raster = 256, translation_raster = 0;
  double p_eps = 0.1;
  auto* p_pipe = app.add_subcommand("pipeline", "Cover the boundary, merge, and verify prox_f");
  p_pipe->add_option("--set", set_text)->required();
  p_pipe->add_option("--eps", p_eps)->capture_default_str();
  p_pipe->add_option("--strategy", strategy, "auto | grid-lines | convex | surface | radial | external-file")
      ->capture_default_str();
  p_pipe->add_option("--cover", cover_path, "Cover file for external-file");
  p_pipe->add_option("--raster", raster)->capture_default_str();
  p_pipe->add_option("--translation-raster", translation_raster)->capture_default_str();
  p_pipe->add_option("--report", report_path);
  p_pipe->add_option("--svg", svg_path);

  auto* p_verify = app.add_subcommand("verify", "Validate a cover file and test it on a set's boundary");
  p_verify->add_option("--cover", cover_path)->required();
  p_verify->add_option("--set", set_text);

  std::string bbox_text;
  std::size_t resolution = 240;
  auto* p_render = app.add_subcommand("render", "SVG of the prox regions of f");
  p_render->add_option("--func", func_path)->required();
  p_render->add_option("--bbox", bbox_text, "xmin,ymin,xmax,ymax")->required();
  p_render->add_option("--resolution", resolution)->capture_default_str();
  p_render->add_option("--out", out_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ErrorCode::parse);
  }

  try {
    c.tol.validate();
    if (p_prox->parsed()) {
      const PolyhedralFunc f = io::read_func(func_path);
      emit(prox_json(prox(f, read_x(x_text, f, c), c.tol)), "");
    } else if (p_member->parsed()) {
      const PolyhedralFunc f = io::read_func(func_path);
      emit({{"member", member(GenStrip(f), read_x(x_text, f, c), c.tol)}}, "");
    } else if (p_oracle->parsed()) {
      const PolyhedralFunc f = io::read_func(func_path);
      const Point x = read_x(x_text, f, c);
      const double R = radius > 0.0 ? radius : std::max(f.lip(), 1e-12);
      const Point yo = prox_oracle(f, x, R, levels);
      const Point ys = prox(f, x, c.tol).y;
      emit({{"oracle", std::vector<double>(yo.coords().begin(), yo.coords().end())},
            {"prox", std::vector<double>(ys.coords().begin(), ys.coords().end())},
            {"distance", distance(yo, ys)}},
           "");
    } else if (p_merge->parsed()) {
      std::vector<GenStrip> strips;
      for (const auto& path : merge_inputs) strips.emplace_back(io::read_func(path));
      const GenStrip m = merge_all(strips, cap);
      json j = io::func_to_json(m.f, "merged");
      if (out_path.empty()) std::cout << j.dump(2) << "\n";
      else io::write_json(out_path, j);
      std::cerr << "pieces " << m.f.size() << ", width bound " << m.width_bound << "\n";
    } else if (p_cover->parsed()) {
      CoverResult res;
      if (kind == "convex") {
        const SetSpec A = io::parse_set_spec(set_text);
        if (!A.convex) throw PreconditionError("cover convex: set '" + A.name + "' is not convex");
        res = convex_neighborhood_cover(*A.convex, r, eps, {c.samples, c.seed, c.tol});
      } else if (kind == "dc") {
        res.strips.push_back(dc_graph_cover(io::read_func(g_path), io::read_func(h_path), eps));
        res.total_width_bound = res.strips.front().width_bound;
        res.target = "graph band of g - h";
      } else if (kind == "surface") {
        const BoundingBox W = BoundingBox::make(Point{a}, Point{b});
        res = surface_cover(io::builtin_field(field, W), W, eps, {c.samples, 2000, c.seed, c.tol});
      } else {
        std::vector<RadialInterval> iv;
        for (const auto& iv2 : io::parse_set_spec("radial:i=" + intervals_text).radial) iv.push_back(iv2);
        res = radial_cover(iv, eps, {2, c.samples, c.seed, c.tol});
      }
      emit(io::cover_result_to_json(res), out_path);
      if (res.violations > 0) {
        std::cerr << "containment violations: " << res.violations << "\n";
        return static_cast<int>(ErrorCode::invariant);
      }
    } else if (p_pipe->parsed()) {
      const SetSpec A = io::parse_set_spec(set_text);
      PipelineConfig cfg;
      cfg.eps_target = p_eps;
      cfg.seed = c.seed;
      cfg.tol = c.tol;
      cfg.raster = raster;
      cfg.translation_raster = translation_raster;
      if (strategy == "auto") {
        cfg.strategy = !cover_path.empty()        ? CoverStrategy::external_file
                       : !A.radial.empty()        ? CoverStrategy::radial
                       : A.graph                  ? CoverStrategy::surface
                       : !A.boundary_planes.empty() && !A.convex ? CoverStrategy::grid_lines
                       : A.convex                 ? CoverStrategy::convex
                                                  : CoverStrategy::grid_lines;
      } else {
        cfg.strategy = parse_strategy(strategy);
      }
      if (!cover_path.empty()) cfg.external = io::read_cover(cover_path).strips;
      const PipelineResult run = run_pipeline(A, cfg);
      emit(io::report_to_json(run.report), report_path);
      if (!svg_path.empty()) {
        RenderOptions ro;
        SampleStream s(c.seed);
        ro.points = sample_box(A.bbox, 4000, s);
        std::erase_if(ro.points, [&](const Point& x) { return !A.contains(x); });
        io::write_text(svg_path, render_pipeline(A, run, ro));
      }
      if (!run.report.passed()) {
        for (const auto& f : run.report.failures) std::cerr << "failed: " << f << "\n";
        return static_cast<int>(ErrorCode::invariant);
      }
    } else if (p_verify->parsed()) {
      const io::CoverFile cf = io::read_cover(cover_path);
      json j{{"strips", cf.strips.size()},
             {"claimed_width_bound", cf.claimed_width_bound},
             {"width_bound", gamma_upper_bound(cf.strips)}};
      std::size_t bad = 0;
      if (!set_text.empty()) {
        const SetSpec A = io::parse_set_spec(set_text);
        SampleStream s(c.seed);
        const auto pts = A.boundary_sampler(c.samples, s);
        for (const Point& x : pts) {
          bool hit = false;
          for (const GenStrip& g : cf.strips) hit = hit || member(g, x, c.tol);
          if (!hit) ++bad;
        }
        j["boundary_samples"] = pts.size();
        j["violations"] = bad;
      }
      emit(j, "");
      if (bad > 0) {
        std::cerr << "boundary samples outside the cover: " << bad << "\n";
        return static_cast<int>(ErrorCode::invariant);
      }
    } else if (p_render->parsed()) {
      const PolyhedralFunc f = io::read_func(func_path);
      RenderOptions ro;
      ro.resolution = resolution;
      ro.tol = c.tol;
      const RenderResult rr = render_strip(f, io::parse_bbox(bbox_text), ro);
      io::write_text(out_path, rr.svg);
      emit({{"regions", rr.stats.regions},
            {"strip_regions", rr.stats.strip_regions},
            {"collapse_regions", rr.stats.collapse_regions},
            {"width", rr.stats.width},
            {"height", rr.stats.height}},
           "");
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << " (minimum budget " << e.minimum_budget() << ")\n";
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorCode::invariant);
  }
  return 0;
}
