#include "kolmo/kolmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "kolmo/errors.hpp"

namespace kolmo {

namespace {

constexpr double kLipSlack = 1e-9;

std::vector<Point> sample_set(const SetSpec& A, std::size_t n, SampleStream& s) {
  std::vector<Point> out;
  out.reserve(n);
  const std::size_t max_attempts = 200 * n + 1000;
  for (std::size_t t = 0; t < max_attempts && out.size() < n; ++t) {
    Point x = sample_in_box(A.bbox, s);
    if (A.contains(x)) out.push_back(std::move(x));
  }
  return out;
}

std::vector<GenStrip> slabs_on(std::span<const Hyperplane> planes, double width) {
  std::vector<GenStrip> out;
  out.reserve(planes.size());
  for (const Hyperplane& h : planes) {
    out.push_back(from_classical(ClassicalStrip::make(h.normal, h.offset, width)));
  }
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::string to_string(CoverStrategy s) {
  switch (s) {
    case CoverStrategy::grid_lines: return "grid-lines";
    case CoverStrategy::convex: return "convex";
    case CoverStrategy::surface: return "surface";
    case CoverStrategy::radial: return "radial";
    case CoverStrategy::external_file: return "external-file";
  }
  return "unknown";
}

CoverStrategy parse_strategy(const std::string& name) {
  for (auto s : {CoverStrategy::grid_lines, CoverStrategy::convex, CoverStrategy::surface,
                 CoverStrategy::radial, CoverStrategy::external_file}) {
    if (to_string(s) == name) return s;
  }
  throw ParseError("unknown cover strategy '" + name + "'");
}

LipschitzCheck verify_lipschitz(const Map& F, std::span<const Point> samples, SampleStream& stream,
                                std::size_t max_pairs) {
  if (samples.size() < 2) throw PreconditionError("verify_lipschitz: need at least 2 samples");
  std::vector<Point> img;
  img.reserve(samples.size());
  for (const Point& x : samples) img.push_back(F(x));
  LipschitzCheck out;
  auto check = [&](std::size_t i, std::size_t j) {
    ++out.pairs;
    const double excess = distance(img[i], img[j]) - distance(samples[i], samples[j]);
    if (excess > kLipSlack) ++out.violations;
    out.worst_excess = std::max(out.worst_excess, excess);
  };
  const std::size_t n = samples.size();
  if (n * (n - 1) / 2 <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) check(i, j);
    }
  } else {
    for (std::size_t t = 0; t < max_pairs; ++t) {
      const std::size_t i = stream.index(n);
      std::size_t j = stream.index(n - 1);
      if (j >= i) ++j;
      check(i, j);
    }
  }
  return out;
}

double measure_constant(std::size_t d, double r) {
  const double h = static_cast<double>(d) / 2.0;
  const double sphere = 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
  return sphere * std::pow(r, static_cast<double>(d) - 1.0);
}

MeasureLoss verify_measure_loss(const SetSpec& A, const Map& F, double displacement, std::size_t n,
                                std::size_t raster, SampleStream& stream) {
  if (raster < 4) throw PreconditionError("verify_measure_loss: raster must be at least 4");
  const std::size_t d = A.dim;
  MeasureLoss out;
  out.cell = A.bbox.max_extent() / static_cast<double>(raster);
  if (displacement > 0.0 && out.cell > displacement) {
    throw PreconditionError("verify_measure_loss: raster cell " + std::to_string(out.cell) +
                            " is coarser than the displacement " + std::to_string(displacement) +
                            "; use a finer raster");
  }
  const double step = out.cell / 2.0;
  std::vector<std::size_t> counts(d);
  double total = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    counts[k] = static_cast<std::size_t>(std::ceil((A.bbox.high[k] - A.bbox.low[k]) / step)) + 1;
    total *= static_cast<double>(counts[k]);
  }
  if (total > 4e6) throw PreconditionError("verify_measure_loss: raster too fine for this dimension");

  const double pad = displacement + 2.0 * out.cell;
  std::vector<std::int64_t> span(d);
  for (std::size_t k = 0; k < d; ++k) {
    span[k] = static_cast<std::int64_t>(std::ceil((A.bbox.high[k] - A.bbox.low[k] + 2.0 * pad) / out.cell)) + 1;
  }
  std::vector<std::int64_t> keys;
  std::vector<std::size_t> idx(d, 0);
  for (;;) {
    Point x(d);
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = std::min(A.bbox.low[k] + step * static_cast<double>(idx[k]), A.bbox.high[k]);
    }
    if (A.contains(x)) {
      const Point y = F(x);
      std::int64_t key = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const auto c = static_cast<std::int64_t>(std::floor((y[k] - A.bbox.low[k] + pad) / out.cell));
        key = key * span[k] + std::clamp<std::int64_t>(c, 0, span[k] - 1);
      }
      keys.push_back(key);
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == counts[k]) idx[k++] = 0;
    if (k == d) break;
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  out.area_after = static_cast<double>(keys.size()) * std::pow(out.cell, static_cast<double>(d));

  const AreaEstimate before = area_monte_carlo(A, n, stream);
  out.area_before = before.estimate;
  out.stderr_ = before.stderr_;
  const double per = A.perimeter.value_or(2.0 * static_cast<double>(d) * std::pow(A.bbox.max_extent(), static_cast<double>(d) - 1.0));
  out.bias_band = 2.0 * std::numbers::sqrt2 * out.cell * per;
  out.loss = out.area_before - out.area_after;
  out.radius = A.bbox.half_diagonal();
  out.constant = measure_constant(d, out.radius);
  out.bound = out.constant * displacement + 4.0 * out.stderr_ + out.bias_band;
  out.ok = out.loss <= out.bound;
  return out;
}

TranslationCheck translation_check(const PolyhedralFunc& f, const BoundingBox& bb, std::size_t raster,
                                   const Tolerances& tol,
                                   const std::function<bool(const Point&)>& restrict_to) {
  require_dim(2, bb.dim(), "translation_check");
  require_dim(2, f.dim(), "translation_check");
  if (raster < 2) throw PreconditionError("translation_check: raster must be at least 2");
  const double h = bb.max_extent() / static_cast<double>(raster);
  const auto nx = static_cast<std::size_t>(std::ceil((bb.high[0] - bb.low[0]) / h));
  const auto ny = static_cast<std::size_t>(std::ceil((bb.high[1] - bb.low[1]) / h));
  std::vector<Point> disp(nx * ny);
  std::vector<char> valid(nx * ny, 0);
  std::vector<std::size_t> warm;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Point x{bb.low[0] + (static_cast<double>(i) + 0.5) * h, bb.low[1] + (static_cast<double>(j) + 0.5) * h};
      if (restrict_to && !restrict_to(x)) continue;
      const ProxResult pr = prox(f, x, tol, warm);
      warm = pr.active;
      if (!pr.differentiable) continue;
      disp[j * nx + i] = x - pr.y;
      valid[j * nx + i] = 1;
    }
  }
  UnionFind uf(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t p = j * nx + i;
      if (!valid[p]) continue;
      if (i + 1 < nx && valid[p + 1]) uf.unite(p, p + 1);
      if (j + 1 < ny && valid[p + nx]) uf.unite(p, p + nx);
    }
  }
  std::vector<Point> sum(nx * ny, Point(2));
  std::vector<std::size_t> count(nx * ny, 0);
  TranslationCheck out;
  for (std::size_t p = 0; p < nx * ny; ++p) {
    if (!valid[p]) continue;
    ++out.pixels;
    const std::size_t r = uf.find(p);
    sum[r] += disp[p];
    if (count[r]++ == 0) ++out.components;
  }
  std::vector<double> var(nx * ny, 0.0);
  for (std::size_t p = 0; p < nx * ny; ++p) {
    if (!valid[p]) continue;
    const std::size_t r = uf.find(p);
    const Point mean = sum[r] / static_cast<double>(count[r]);
    var[r] += (disp[p] - mean).squared_norm() / static_cast<double>(count[r]);
  }
  for (double v : var) out.max_variance = std::max(out.max_variance, v);
  return out;
}

CoverResult build_boundary_cover(const SetSpec& A, const PipelineConfig& cfg) {
  if (!(cfg.eps_target > 0.0)) throw PreconditionError("pipeline: eps must be positive");
  if (!(cfg.margin > 0.0 && cfg.margin < 1.0)) throw PreconditionError("pipeline: margin must be in (0, 1)");
  const double budget = cfg.eps_target * (2.0 - cfg.margin);
  CoverResult res;
  res.target = "boundary of " + A.name;

  switch (cfg.strategy) {
    case CoverStrategy::grid_lines: {
      if (A.boundary_planes.empty()) {
        throw PreconditionError("grid-lines strategy needs a set whose boundary lies on known hyperplanes");
      }
      const double w = budget / static_cast<double>(A.boundary_planes.size());
      constexpr double kMinWidth = 1e-7;
      if (w < kMinWidth) {
        throw BudgetError("grid-lines: " + std::to_string(A.boundary_planes.size()) +
                              " slabs leave width " + std::to_string(w) + " per slab",
                          kMinWidth * static_cast<double>(A.boundary_planes.size()) / (2.0 - cfg.margin));
      }
      res.strips = slabs_on(A.boundary_planes, w);
      break;
    }
    case CoverStrategy::convex: {
      if (!A.convex) throw PreconditionError("convex strategy needs a convex set");
      ConvexCoverOptions opt;
      opt.samples = 0;
      opt.seed = cfg.seed;
      opt.tol = cfg.tol;
      res = convex_neighborhood_cover(*A.convex, budget / 4.0, budget / 4.0, opt);
      break;
    }
    case CoverStrategy::radial: {
      if (A.radial.empty()) throw PreconditionError("radial strategy needs a radial set");
      const double n = 2.0 * static_cast<double>(A.radial.size());
      const double e = budget / (4.0 * n);
      RadialCoverOptions opt;
      opt.dim = A.dim;
      opt.samples = 0;
      opt.tol = cfg.tol;
      for (const auto& iv : A.radial) {
        for (double rho : {iv.lo, iv.hi}) {
          const RadialInterval shell{rho, rho + e};
          CoverResult c = radial_cover(std::span(&shell, 1), e, opt);
          res.strips.push_back(c.strips.front());
          res.slack += c.slack;
        }
      }
      break;
    }
    case CoverStrategy::surface: {
      if (!A.graph || !A.graph_domain) throw PreconditionError("surface strategy needs a subgraph set");
      SurfaceCoverOptions opt;
      opt.samples = 0;
      opt.seed = cfg.seed;
      opt.tol = cfg.tol;
      CoverResult c = surface_cover(*A.graph, *A.graph_domain, budget / 32.0, opt);
      res.strips.push_back(c.strips.front());
      if (!A.boundary_planes.empty()) {
        const auto flat = slabs_on(A.boundary_planes, budget / (2.0 * static_cast<double>(A.boundary_planes.size())));
        res.strips.insert(res.strips.end(), flat.begin(), flat.end());
      }
      break;
    }
    case CoverStrategy::external_file: {
      if (cfg.external.empty()) throw PreconditionError("external-file strategy needs a cover file");
      res.strips = cfg.external;
      break;
    }
  }

  res.total_width_bound = gamma_upper_bound(res.strips);
  if (!(res.total_width_bound < 2.0 * cfg.eps_target)) {
    throw BudgetError("cover width " + std::to_string(res.total_width_bound) + " is not below 2 eps = " +
                          std::to_string(2.0 * cfg.eps_target),
                      res.total_width_bound / 2.0);
  }
  for (const GenStrip& s : res.strips) require_dim(A.dim, s.dim(), "build_boundary_cover");

  SampleStream s = SampleStream(cfg.seed).split(1);
  const auto pts = A.boundary_sampler(cfg.boundary_samples, s);
  for (const Point& x : pts) {
    ++res.samples_checked;
    const bool hit = std::any_of(res.strips.begin(), res.strips.end(),
                                 [&](const GenStrip& g) { return member(g, x, cfg.tol); });
    if (!hit) ++res.violations;
  }
  return res;
}

Point PipelineResult::map(const Point& x, const Tolerances& tol) const { return prox(strip.f, x, tol).y; }

PipelineResult run_pipeline(const SetSpec& A, const PipelineConfig& cfg) {
  cfg.tol.validate();
  const CoverResult cover = build_boundary_cover(A, cfg);
  GenStrip merged = merge_all(cover.strips, cfg.merge_cap);
  PipelineResult out{std::move(merged), {}};
  const PolyhedralFunc& f = out.strip.f;
  PipelineReport& rep = out.report;
  auto fail = [&](std::string msg) { rep.failures.push_back(std::move(msg)); };

  rep.set_name = A.name;
  rep.strategy = to_string(cfg.strategy);
  rep.eps_target = cfg.eps_target;
  rep.cover_strips = cover.strips.size();
  rep.cover_width_bound = cover.total_width_bound;
  rep.boundary_samples = cover.samples_checked;
  rep.boundary_violations = cover.violations;
  rep.pieces = f.size();
  rep.strip_width_bound = out.strip.width_bound;
  rep.lip = f.lip();
  if (cover.violations > 0) fail("boundary samples outside the cover: " + std::to_string(cover.violations));
  if (rep.lip > cfg.eps_target) fail("lip(f) exceeds eps");

  const SampleStream root(cfg.seed);
  SampleStream s_disp = root.split(2);
  SampleStream s_bnd = root.split(3);
  std::vector<Point> pts = sample_set(A, cfg.displacement_samples, s_disp);
  const auto bnd = A.boundary_sampler(std::min<std::size_t>(cfg.boundary_samples, 10000), s_bnd);
  pts.insert(pts.end(), bnd.begin(), bnd.end());
  std::vector<std::size_t> warm;
  for (const Point& x : pts) {
    const ProxResult pr = prox(f, x, cfg.tol, warm);
    warm = pr.active;
    ++rep.displacement_samples;
    rep.max_displacement = std::max(rep.max_displacement, distance(pr.y, x));
    if (!pr.differentiable) {
      const double res = support_pair_residual(f, pr, cfg.tol);
      if (std::isinf(res)) {
        ++rep.flatten_band_samples;
        continue;
      }
      ++rep.flatten_samples;
      rep.flatten_residual = std::max(rep.flatten_residual, res);
    }
  }
  if (rep.max_displacement > rep.lip + kLipSlack) fail("displacement exceeds lip(f)");
  if (rep.max_displacement > cfg.eps_target + kLipSlack) fail("displacement exceeds eps");
  if (rep.flatten_residual > 1e-7) fail("flatten residual above 1e-7");

  const Map F = [&](const Point& x) { return prox(f, x, cfg.tol).y; };
  SampleStream s_lip = root.split(4);
  const auto lip_pts = sample_box(A.bbox.expanded(cfg.eps_target), cfg.lipschitz_points, s_lip);
  const LipschitzCheck lc = verify_lipschitz(F, lip_pts, s_lip, cfg.lipschitz_pairs);
  rep.lipschitz_pairs = lc.pairs;
  rep.lipschitz_pair_violations = lc.violations;
  if (lc.violations > 0) fail("Lipschitz pair violations: " + std::to_string(lc.violations));

  SampleStream s_area = root.split(5);
  rep.measure = verify_measure_loss(A, F, rep.lip, cfg.area_samples, cfg.raster, s_area);
  if (!rep.measure.ok) fail("measure loss above C eps + 4 stderr + bias band");

  SampleStream s_strip = root.split(6);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < cfg.strip_samples; ++t) {
    const Point x = sample_in_box(A.bbox, s_strip);
    if (A.contains(x) && member(out.strip, x, cfg.tol)) ++hits;
  }
  if (cfg.strip_samples > 0) {
    const double p = static_cast<double>(hits) / static_cast<double>(cfg.strip_samples);
    rep.strip_area = A.bbox.volume() * p;
    rep.strip_area_stderr = A.bbox.volume() * std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.strip_samples));
    rep.observed_strip_constant = rep.lip > 0.0 ? rep.strip_area / rep.lip : 0.0;
  }

  if (cfg.translation_raster > 0 && A.dim == 2) {
    rep.translation = translation_check(f, A.bbox, cfg.translation_raster, cfg.tol,
                                        [&](const Point& x) { return A.membership(x) == Membership::inside; });
    if (rep.translation->max_variance > 1e-12) fail("translation variance above 1e-12");
  }
  return out;
}

}  // namespace kolmo
