#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "kolmo/covers.hpp"
#include "kolmo/errors.hpp"
#include "kolmo/gstrip.hpp"
#include "kolmo/io.hpp"
#include "kolmo/kolmap.hpp"
#include "kolmo/polyfun.hpp"
#include "kolmo/svg.hpp"

namespace py = pybind11;
using namespace kolmo;

namespace {

Point to_point(const std::vector<double>& v) { return Point(std::span<const double>(v)); }

std::vector<double> from_point(const Point& p) { return {p.coords().begin(), p.coords().end()}; }

py::object to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

Tolerances make_tol(double act, double grad, double cert) {
  Tolerances t;
  t.act_tol = act;
  t.grad_tol = grad;
  t.cert_tol = cert;
  t.validate();
  return t;
}

}  // namespace

PYBIND11_MODULE(_kolmo, m) {
  m.doc() = "Polyhedral strips and boundary-flattening maps";
  m.attr("__version__") = KOLMO_VERSION;

  // The module keeps a reference to each type; the handles below stay valid.
  static PyObject* base = py::exception<Error>(m, "KolmoError").release().ptr();
  static PyObject* parse_exc = py::exception<ParseError>(m, "ParseError", base).release().ptr();
  static PyObject* pre_exc = py::exception<PreconditionError>(m, "PreconditionError", base).release().ptr();
  static PyObject* inv_exc = py::exception<InvariantError>(m, "InvariantError", base).release().ptr();
  static PyObject* bud_exc = py::exception<BudgetError>(m, "BudgetError", base).release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const BudgetError& e) {
      py::object err = py::handle(bud_exc)(e.what());
      py::setattr(err, "minimum_budget", py::float_(e.minimum_budget()));
      PyErr_SetObject(bud_exc, err.ptr());
    } catch (const ParseError& e) {
      py::set_error(parse_exc, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(pre_exc, e.what());
    } catch (const InvariantError& e) {
      py::set_error(inv_exc, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init(&make_tol), py::arg("act_tol") = Tolerances{}.act_tol,
           py::arg("grad_tol") = Tolerances{}.grad_tol, py::arg("cert_tol") = Tolerances{}.cert_tol)
      .def_readonly("act_tol", &Tolerances::act_tol)
      .def_readonly("grad_tol", &Tolerances::grad_tol)
      .def_readonly("cert_tol", &Tolerances::cert_tol);

  py::class_<PolyhedralFunc>(m, "PolyhedralFunc")
      .def(py::init([](const std::vector<std::vector<double>>& grads, const std::vector<double>& offsets) {
             if (grads.empty()) throw PreconditionError("PolyhedralFunc: no pieces");
             std::vector<double> flat;
             for (const auto& g : grads) {
               if (g.size() != grads.front().size()) throw DimensionError(grads.front().size(), g.size(), "PolyhedralFunc");
               flat.insert(flat.end(), g.begin(), g.end());
             }
             return PolyhedralFunc(grads.front().size(), std::move(flat), offsets);
           }),
           py::arg("gradients"), py::arg("offsets"))
      .def_static("from_json", [](const py::object& o) { return io::func_from_json(from_py(o)); })
      .def("to_json", [](const PolyhedralFunc& f) { return to_py(io::func_to_json(f)); })
      .def_property_readonly("dim", &PolyhedralFunc::dim)
      .def_property_readonly("lip", &PolyhedralFunc::lip)
      .def("__len__", &PolyhedralFunc::size)
      .def("gradient", [](const PolyhedralFunc& f, std::size_t i) { return from_point(f.gradient_point(i)); })
      .def("offset", &PolyhedralFunc::offset)
      .def("__call__", [](const PolyhedralFunc& f, const std::vector<double>& x) { return eval(f, to_point(x)).value; })
      .def("__repr__", [](const PolyhedralFunc& f) {
        return "<PolyhedralFunc dim=" + std::to_string(f.dim()) + " pieces=" + std::to_string(f.size()) + ">";
      });

  py::class_<ProxResult>(m, "ProxResult")
      .def_property_readonly("y", [](const ProxResult& r) { return from_point(r.y); })
      .def_readonly("active", &ProxResult::active)
      .def_readonly("differentiable", &ProxResult::differentiable)
      .def_readonly("dual_weights", &ProxResult::dual_weights)
      .def_readonly("certificate_residual", &ProxResult::certificate_residual)
      .def_readonly("iterations", &ProxResult::iterations);

  m.def("prox", [](const PolyhedralFunc& f, const std::vector<double>& x, const Tolerances& tol) {
    return prox(f, to_point(x), tol);
  }, py::arg("f"), py::arg("x"), py::arg("tol") = Tolerances{});
  m.def("prox_oracle", [](const PolyhedralFunc& f, const std::vector<double>& x, double radius, std::size_t levels) {
    return from_point(prox_oracle(f, to_point(x), radius, levels));
  }, py::arg("f"), py::arg("x"), py::arg("radius"), py::arg("levels") = 6);
  m.def("subgradient_certificate", [](const PolyhedralFunc& f, const std::vector<double>& x,
                                      const std::vector<double>& y, const Tolerances& tol) {
    const auto c = subgradient_certificate(f, to_point(x), to_point(y), tol);
    return py::make_tuple(c.ok, c.residual);
  }, py::arg("f"), py::arg("x"), py::arg("y"), py::arg("tol") = Tolerances{});

  py::class_<GenStrip>(m, "GenStrip")
      .def(py::init<PolyhedralFunc>(), py::arg("f"))
      .def_static("classical", [](const std::vector<double>& normal, double center, double width) {
        return from_classical(ClassicalStrip::make(to_point(normal), center, width));
      }, py::arg("normal"), py::arg("center"), py::arg("width"))
      .def_readonly("f", &GenStrip::f)
      .def_readonly("width_bound", &GenStrip::width_bound)
      .def_property_readonly("dim", &GenStrip::dim)
      .def("contains", [](const GenStrip& s, const std::vector<double>& x, const Tolerances& tol) {
        return member(s, to_point(x), tol);
      }, py::arg("x"), py::arg("tol") = Tolerances{})
      .def("map", [](const GenStrip& s, const std::vector<double>& x) {
        return from_point(prox(s.f, to_point(x)).y);
      }, py::arg("x"));

  m.def("merge", [](const GenStrip& a, const GenStrip& b, std::size_t cap, bool prune_pieces) {
    return merge(a, b, MergeOptions{cap, prune_pieces});
  }, py::arg("a"), py::arg("b"), py::arg("cap") = 4096, py::arg("prune") = true);
  m.def("merge_all", [](const std::vector<GenStrip>& strips, std::size_t cap) {
    return merge_all(strips, cap);
  }, py::arg("strips"), py::arg("cap") = 4096);
  m.def("prune", [](const PolyhedralFunc& f) { return prune(f); }, py::arg("f"));
  m.def("width_bound", [](const std::vector<GenStrip>& strips) { return gamma_upper_bound(strips); },
        py::arg("strips"));

  py::class_<CoverResult>(m, "CoverResult")
      .def_readonly("strips", &CoverResult::strips)
      .def_readonly("total_width_bound", &CoverResult::total_width_bound)
      .def_readonly("slack", &CoverResult::slack)
      .def_readonly("samples_checked", &CoverResult::samples_checked)
      .def_readonly("violations", &CoverResult::violations)
      .def("to_json", [](const CoverResult& r) { return to_py(io::cover_result_to_json(r)); });

  m.def("ball_cover", [](const std::vector<double>& center, double radius, double r, double eps,
                         std::size_t samples, std::uint64_t seed) {
    ConvexCoverOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    return convex_neighborhood_cover(ConvexBody::ball(to_point(center), radius), r, eps, opt);
  }, py::arg("center"), py::arg("radius"), py::arg("r"), py::arg("eps"), py::arg("samples") = 10000,
        py::arg("seed") = 0);
  m.def("hull_cover", [](const std::vector<std::vector<double>>& pts, double r, double eps,
                         std::size_t samples, std::uint64_t seed) {
    std::vector<Point> p;
    for (const auto& v : pts) p.push_back(to_point(v));
    ConvexCoverOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    return convex_neighborhood_cover(ConvexBody::from_points(std::move(p)), r, eps, opt);
  }, py::arg("points"), py::arg("r"), py::arg("eps"), py::arg("samples") = 10000, py::arg("seed") = 0);
  m.def("dc_graph_cover", &dc_graph_cover, py::arg("g"), py::arg("h"), py::arg("eps"));
  m.def("surface_cover", [](const std::string& field, double a, double b, double eps, std::uint64_t seed) {
    const BoundingBox W = BoundingBox::make(Point{a}, Point{b});
    SurfaceCoverOptions opt;
    opt.seed = seed;
    return surface_cover(io::builtin_field(field, W), W, eps, opt);
  }, py::arg("field"), py::arg("a"), py::arg("b"), py::arg("eps"), py::arg("seed") = 0);
  m.def("radial_cover", [](const std::vector<std::pair<double, double>>& intervals, double eps,
                           std::size_t dim, std::uint64_t seed) {
    std::vector<RadialInterval> iv;
    for (const auto& [lo, hi] : intervals) iv.push_back({lo, hi});
    RadialCoverOptions opt;
    opt.dim = dim;
    opt.seed = seed;
    return radial_cover(iv, eps, opt);
  }, py::arg("intervals"), py::arg("eps"), py::arg("dim") = 2, py::arg("seed") = 0);

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_readonly("strip", &PipelineResult::strip)
      .def_property_readonly("passed", [](const PipelineResult& r) { return r.report.passed(); })
      .def_property_readonly("report", [](const PipelineResult& r) { return to_py(io::report_to_json(r.report)); })
      .def("map", [](const PipelineResult& r, const std::vector<double>& x) { return from_point(r.map(to_point(x))); },
           py::arg("x"));

  m.def("run_pipeline", [](const std::string& set, double eps, const std::string& strategy, std::uint64_t seed,
                           std::size_t samples) {
    const SetSpec A = io::parse_set_spec(set);
    PipelineConfig cfg;
    cfg.eps_target = eps;
    cfg.strategy = parse_strategy(strategy);
    cfg.seed = seed;
    cfg.boundary_samples = samples;
    cfg.displacement_samples = samples;
    cfg.area_samples = samples;
    cfg.strip_samples = samples;
    cfg.lipschitz_points = std::min<std::size_t>(samples, 2000);
    cfg.lipschitz_pairs = samples;
    py::gil_scoped_release release;
    return run_pipeline(A, cfg);
  }, py::arg("set"), py::arg("eps") = 0.1, py::arg("strategy") = "grid-lines", py::arg("seed") = 0,
        py::arg("samples") = 10000);

  m.def("render_svg", [](const PolyhedralFunc& f, const std::vector<double>& low, const std::vector<double>& high,
                         std::size_t resolution) {
    RenderOptions opt;
    opt.resolution = resolution;
    const RenderResult r = render_strip(f, BoundingBox::make(to_point(low), to_point(high)), opt);
    py::dict stats;
    stats["regions"] = r.stats.regions;
    stats["strip_regions"] = r.stats.strip_regions;
    stats["collapse_regions"] = r.stats.collapse_regions;
    return py::make_tuple(r.svg, stats);
  }, py::arg("f"), py::arg("low"), py::arg("high"), py::arg("resolution") = 240);
}
