#include "kolmo/io.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "kolmo/errors.hpp"

namespace kolmo::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + " from '" + text + "'");
  }
  if (used != t.size() || !std::isfinite(v)) throw ParseError("cannot parse " + what + " from '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v)) throw ParseError(what + " must be an integer");
  return static_cast<int>(v);
}

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  if (trim(text).empty()) return out;
  for (const std::string& part : split(text, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value in '" + part + "'");
    out[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return out;
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ParseError(std::string("missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

}  // namespace

json func_to_json(const PolyhedralFunc& f, const std::string& name) {
  json j;
  j["dim"] = f.dim();
  if (!name.empty()) j["name"] = name;
  json pieces = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto g = f.gradient(i);
    pieces.push_back({{"gradient", std::vector<double>(g.begin(), g.end())}, {"offset", f.offset(i)}});
  }
  j["pieces"] = std::move(pieces);
  return j;
}

PolyhedralFunc func_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("function: expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_unsigned()) throw ParseError("function: missing 'dim'");
  const auto d = j["dim"].get<std::size_t>();
  if (d < 1 || d > kMaxDim) throw ParseError("function: dim must be in 1..8");
  if (!j.contains("pieces") || !j["pieces"].is_array() || j["pieces"].empty()) {
    throw ParseError("function: 'pieces' must be a nonempty array");
  }
  std::vector<double> grads;
  std::vector<double> offs;
  for (const json& p : j["pieces"]) {
    if (!p.is_object() || !p.contains("gradient") || !p["gradient"].is_array()) {
      throw ParseError("function: each piece needs a 'gradient' array");
    }
    if (p["gradient"].size() != d) {
      throw ParseError("function: gradient length " + std::to_string(p["gradient"].size()) +
                       " does not match dim " + std::to_string(d));
    }
    for (const json& v : p["gradient"]) {
      if (!v.is_number()) throw ParseError("function: non-numeric gradient entry");
      grads.push_back(v.get<double>());
    }
    offs.push_back(get_number(p, "offset"));
  }
  try {
    return PolyhedralFunc(d, std::move(grads), std::move(offs));
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("function: ") + e.what());
  }
}

json cover_to_json(const CoverFile& c) {
  json strips = json::array();
  for (const GenStrip& s : c.strips) strips.push_back(func_to_json(s.f));
  return {{"target", c.target}, {"claimed_width_bound", c.claimed_width_bound}, {"strips", strips}};
}

CoverFile cover_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("cover: expected a JSON object");
  CoverFile c;
  c.target = j.value("target", std::string());
  c.claimed_width_bound = get_number(j, "claimed_width_bound");
  if (!j.contains("strips") || !j["strips"].is_array()) throw ParseError("cover: missing 'strips' array");
  for (const json& s : j["strips"]) c.strips.emplace_back(func_from_json(s));
  const double actual = gamma_upper_bound(c.strips);
  if (c.claimed_width_bound < actual - 1e-12) {
    throw ParseError("cover: claimed width bound " + std::to_string(c.claimed_width_bound) +
                     " is below the recomputed sum of 2 lip(f_i) = " + std::to_string(actual));
  }
  return c;
}

CoverFile make_cover_file(const CoverResult& r) {
  return {r.target, r.strips, gamma_upper_bound(r.strips)};
}

json cover_result_to_json(const CoverResult& r) {
  json j = cover_to_json(make_cover_file(r));
  j["slack"] = r.slack;
  j["samples_checked"] = r.samples_checked;
  j["violations"] = r.violations;
  j["convexity_violations"] = r.convexity_violations;
  return j;
}

json report_to_json(const PipelineReport& r) {
  json j;
  j["set"] = r.set_name;
  j["strategy"] = r.strategy;
  j["eps_target"] = r.eps_target;
  j["cover"] = {{"strips", r.cover_strips},
                {"width_bound", r.cover_width_bound},
                {"boundary_samples", r.boundary_samples},
                {"boundary_violations", r.boundary_violations}};
  j["merged"] = {{"pieces", r.pieces}, {"width_bound", r.strip_width_bound}, {"lip", r.lip}};
  j["displacement"] = {{"max", r.max_displacement}, {"samples", r.displacement_samples}};
  j["lipschitz"] = {{"pairs", r.lipschitz_pairs}, {"violations", r.lipschitz_pair_violations}};
  j["flatten"] = {{"residual", r.flatten_residual}, {"samples", r.flatten_samples},
                  {"band_samples", r.flatten_band_samples}};
  if (r.translation) {
    j["translation"] = {{"components", r.translation->components},
                        {"pixels", r.translation->pixels},
                        {"max_variance", r.translation->max_variance}};
  }
  const MeasureLoss& m = r.measure;
  j["measure"] = {{"area_before", m.area_before}, {"stderr", m.stderr_},  {"area_after", m.area_after},
                  {"cell", m.cell},               {"bias_band", m.bias_band}, {"loss", m.loss},
                  {"radius", m.radius},           {"constant", m.constant},   {"bound", m.bound},
                  {"ok", m.ok}};
  j["strip_area"] = {{"estimate", r.strip_area},
                     {"stderr", r.strip_area_stderr},
                     {"observed_constant", r.observed_strip_constant}};
  j["failures"] = r.failures;
  j["passed"] = r.passed();
  return j;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  out << text;
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

PolyhedralFunc read_func(const std::string& path) { return func_from_json(read_json(path)); }

CoverFile read_cover(const std::string& path) { return cover_from_json(read_json(path)); }

Point parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || parts.size() > kMaxDim) throw ParseError("point must have 1..8 coordinates: '" + text + "'");
  Point p(parts.size());
  for (std::size_t k = 0; k < parts.size(); ++k) p[k] = parse_double(parts[k], "coordinate");
  return p;
}

BoundingBox parse_bbox(const std::string& text) {
  const Point all = parse_point(text);
  if (all.dim() % 2 != 0) throw ParseError("bbox needs an even number of values");
  const std::size_t d = all.dim() / 2;
  Point lo(d);
  Point hi(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = all[k];
    hi[k] = all[d + k];
  }
  try {
    return BoundingBox::make(lo, hi);
  } catch (const PreconditionError& e) {
    throw ParseError(std::string("bbox: ") + e.what());
  }
}

ScalarField builtin_field(const std::string& name, const BoundingBox& W) {
  require_dim(1, W.dim(), "builtin_field");
  const double R = std::max(std::abs(W.low[0]), std::abs(W.high[0]));
  ScalarField f;
  f.dim = 1;
  f.M = 0.1;
  f.description = name;
  if (name == "sin") {
    f.value = [](const Point& x) { return std::sin(x[0]) / 10.0; };
    f.gradient = [](const Point& x) { return Point{std::cos(x[0]) / 10.0}; };
    f.L = 0.1;
  } else if (name == "parabola") {
    f.value = [](const Point& x) { return x[0] * x[0] / 20.0; };
    f.gradient = [](const Point& x) { return Point{x[0] / 10.0}; };
    f.L = R / 10.0;
  } else if (name == "zero") {
    f.value = [](const Point&) { return 0.0; };
    f.gradient = [](const Point&) { return Point{0.0}; };
    f.L = 0.0;
  } else {
    throw ParseError("unknown scalar field '" + name + "' (sin, parabola, zero)");
  }
  return f;
}

SetSpec parse_set_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = trim(text.substr(0, colon));
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "square") return make_square();
    if (kind == "polygon") {
      std::vector<Point> v;
      for (const std::string& p : split(rest, ';')) v.push_back(parse_point(p));
      return make_polygon(std::move(v));
    }
    const auto params = parse_params(rest);
    auto num = [&](const std::string& key, double fallback) {
      const auto it = params.find(key);
      return it == params.end() ? fallback : parse_double(it->second, key);
    };
    auto need = [&](const std::string& key) {
      if (!params.count(key)) throw ParseError(kind + ": missing parameter '" + key + "'");
      return params.at(key);
    };
    if (kind == "disk") return make_disk(num("r", 1.0), Point{num("cx", 0.0), num("cy", 0.0)});
    if (kind == "koch") return make_koch(parse_int(need("k"), "k"));
    if (kind == "carpet") return make_carpet(parse_int(need("k"), "k"));
    if (kind == "radial") {
      std::vector<RadialInterval> iv;
      for (const std::string& s : split(need("i"), ';')) {
        const auto dash = s.find('-', 1);
        if (dash == std::string::npos) throw ParseError("radial: interval must look like lo-hi");
        iv.push_back({parse_double(s.substr(0, dash), "lo"), parse_double(s.substr(dash + 1), "hi")});
      }
      return make_radial(std::move(iv), static_cast<std::size_t>(num("dim", 2.0)));
    }
    if (kind == "subgraph") {
      const BoundingBox W = BoundingBox::make(Point{num("a", -1.0 / 12.0)}, Point{num("b", 1.0 / 12.0)});
      const auto it = params.find("f");
      return make_subgraph(builtin_field(it == params.end() ? "sin" : it->second, W), W);
    }
  } catch (const DimensionError& e) {
    throw ParseError(std::string("set spec: ") + e.what());
  }
  throw ParseError("unknown set '" + kind + "' (square, disk, polygon, koch, carpet, radial, subgraph)");
}

}  // namespace kolmo::io
