#include "kolmo/covers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace kolmo {

namespace {

constexpr double kBand = 1e-9;

// Fibonacci-type directions on S^2; random directions beyond.
std::vector<Point> sphere_directions(std::size_t d, std::size_t n) {
  std::vector<Point> out;
  if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = golden * static_cast<double>(i);
      out.push_back(Point{rho * std::cos(th), rho * std::sin(th), z});
    }
    return out;
  }
  SampleStream s(0x5eed);
  for (std::size_t k = 0; k < d; ++k) {
    Point e(d);
    e[k] = 1.0;
    out.push_back(e);
    out.push_back(-e);
  }
  while (out.size() < n) out.push_back(sample_direction(d, s));
  return out;
}

GenStrip strip_from_facets(std::span<const Facet> facets, double r, double eps) {
  const std::size_t d = facets.front().normal.dim();
  const double scale = r + eps;
  std::vector<double> grads(d, 0.0);
  std::vector<double> offs{0.0};
  for (const Facet& f : facets) {
    Point g = f.normal * scale;
    // Keep |g| <= r + eps in floating point so the width bound holds exactly.
    while (g.norm() > scale) g *= (1.0 - 1e-15);
    grads.insert(grads.end(), g.coords().begin(), g.coords().end());
    offs.push_back(-scale * f.offset);
  }
  return GenStrip(PolyhedralFunc(d, std::move(grads), std::move(offs)));
}

Point sample_shell(std::size_t d, double lo, double hi, SampleStream& s) {
  const Point u = sample_direction(d, s);
  const double dd = static_cast<double>(d);
  const double t = s.uniform();
  const double rad = std::pow(std::pow(lo, dd) + t * (std::pow(hi, dd) - std::pow(lo, dd)), 1.0 / dd);
  return u * std::min(rad, hi);
}

}  // namespace

ConvexBody ConvexBody::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw PreconditionError("ball: radius must be positive");
  const std::size_t d = center.dim();
  ConvexBody b;
  b.dim = d;
  Point lo = center;
  Point hi = center;
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] -= radius;
    hi[k] += radius;
  }
  b.bbox = BoundingBox::make(lo, hi);
  b.description = "ball(center=" + to_string(center) + ", r=" + std::to_string(radius) + ")";
  b.support = [center, radius](const Point& u) { return dot(u, center) + radius; };
  b.signed_distance = [center, radius](const Point& x) { return distance(x, center) - radius; };
  b.cloud = [center, radius, d](double tol) {
    std::vector<Point> pts;
    if (d == 1) {
      pts.push_back(center - Point{radius});
      pts.push_back(center + Point{radius});
      return pts;
    }
    if (d == 2) {
      // Regular n-gon with sagitta r (1 - cos(pi/n)) <= tol.
      const double c = std::clamp(1.0 - tol / radius, -1.0, 1.0);
      const auto n = std::max<std::size_t>(
          3, static_cast<std::size_t>(std::ceil(std::numbers::pi / std::acos(c))));
      for (std::size_t i = 0; i < n; ++i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back(center + Point{radius * std::cos(th), radius * std::sin(th)});
      }
      return pts;
    }
    const double cap = std::acos(std::clamp(1.0 - tol / radius, -1.0, 1.0));
    const double est = 4.0 * std::pow(1.0 / std::max(cap, 1e-3), static_cast<double>(d - 1));
    const auto n = static_cast<std::size_t>(std::clamp(est, 2.0 * static_cast<double>(d) + 2.0, 1e6));
    for (const Point& u : sphere_directions(d, n)) pts.push_back(center + u * radius);
    return pts;
  };
  return b;
}

ConvexBody ConvexBody::box(const BoundingBox& bb) {
  ConvexBody b;
  b.dim = bb.dim();
  b.bbox = bb;
  b.description = "box(" + to_string(bb.low) + ", " + to_string(bb.high) + ")";
  b.support = [bb](const Point& u) {
    double s = 0.0;
    for (std::size_t k = 0; k < bb.dim(); ++k) s += std::max(u[k] * bb.low[k], u[k] * bb.high[k]);
    return s;
  };
  b.signed_distance = [bb](const Point& x) {
    double out2 = 0.0;
    double in = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bb.dim(); ++k) {
      const double q = std::max(bb.low[k] - x[k], x[k] - bb.high[k]);
      if (q > 0.0) out2 += q * q;
      in = std::max(in, q);
    }
    return out2 > 0.0 ? std::sqrt(out2) : in;
  };
  b.cloud = [bb](double) { return bb.corners(); };
  return b;
}

ConvexBody ConvexBody::from_points(std::vector<Point> points) {
  if (points.empty()) throw PreconditionError("from_points: empty point cloud");
  const std::size_t d = points[0].dim();
  Point lo = points[0];
  Point hi = points[0];
  for (const Point& p : points) {
    require_dim(d, p.dim(), "ConvexBody::from_points");
    if (!p.is_finite()) throw PreconditionError("from_points: non-finite point");
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  ConvexBody b;
  b.dim = d;
  b.bbox = BoundingBox::make(lo, hi);
  b.description = "hull of " + std::to_string(points.size()) + " points";
  auto pts = std::make_shared<const std::vector<Point>>(std::move(points));
  auto facets = std::make_shared<std::vector<Facet>>();
  if (affine_rank(*pts) == d) *facets = hull_facets(*pts);
  b.support = [pts](const Point& u) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Point& p : *pts) m = std::max(m, dot(u, p));
    return m;
  };
  b.signed_distance = [pts, facets](const Point& x) {
    if (!facets->empty()) {
      const double fm = facet_max(*facets, x);
      if (fm <= 0.0) return fm;
    }
    return distance_to_hull(*pts, x);
  };
  b.cloud = [pts](double) { return *pts; };
  return b;
}

ConvexBody ConvexBody::from_oracle(std::function<bool(const Point&)> inside, const BoundingBox& bb,
                                   const Point& interior, std::size_t rays) {
  const std::size_t d = bb.dim();
  require_dim(d, interior.dim(), "ConvexBody::from_oracle");
  if (!inside(interior)) throw PreconditionError("from_oracle: interior point is not inside");
  std::vector<Point> dirs;
  if (d == 2) {
    for (std::size_t i = 0; i < rays; ++i) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(rays);
      dirs.push_back(Point{std::cos(th), std::sin(th)});
    }
  } else {
    dirs = sphere_directions(d, rays);
  }
  const double reach = 2.0 * bb.half_diagonal() + 1.0;
  auto boundary = std::make_shared<std::vector<Point>>();
  for (const Point& u : dirs) {
    double lo = 0.0;
    double hi = reach;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (inside(interior + u * mid)) lo = mid;
      else hi = mid;
    }
    boundary->push_back(interior + u * lo);
  }
  ConvexBody b;
  b.dim = d;
  b.bbox = bb;
  b.description = "oracle body";
  b.support = [boundary](const Point& u) {
    double m = -std::numeric_limits<double>::infinity();
    for (const Point& p : *boundary) m = std::max(m, dot(u, p));
    return m;
  };
  b.signed_distance = [boundary, inside](const Point& x) {
    if (inside(x)) {
      double m = std::numeric_limits<double>::infinity();
      for (const Point& p : *boundary) m = std::min(m, distance(x, p));
      return -m;
    }
    return distance_to_hull(*boundary, x);
  };
  b.cloud = [boundary](double) { return *boundary; };
  return b;
}

Point ScalarField::subgradient(const Point& x, double h) const {
  if (gradient) return gradient(x);
  Point g(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    Point a = x;
    Point b = x;
    a[k] += h;
    b[k] -= h;
    g[k] = (value(a) - value(b)) / (2.0 * h);
  }
  return g;
}

GenStrip convex_neighborhood_strip(std::span<const Point> net, double r, double eps) {
  if (!(r > 0.0) || !(eps > 0.0)) throw PreconditionError("convex cover: r and eps must be positive");
  const auto facets = hull_facets(net);
  return strip_from_facets(facets, r, eps);
}

CoverResult convex_neighborhood_cover(const ConvexBody& C, double r, double eps,
                                      const ConvexCoverOptions& opt) {
  if (!(r > 0.0) || !(eps > 0.0)) throw PreconditionError("convex cover: r and eps must be positive");
  // Coverage only needs <n_i, c> - b_i <= eps for all c in C;
  // the net keeps half of that as margin so the closed outer shell is covered.
  double tol = eps / 2.0;
  std::vector<Facet> facets;
  bool ok = false;
  for (int attempt = 0; attempt < 8 && !ok; ++attempt, tol /= 2.0) {
    const auto cloud = C.cloud(tol);
    if (cloud.empty()) throw PreconditionError("convex cover: empty point cloud");
    if (C.dim >= 3 && cloud.size() > 400) {
      throw BudgetError("convex cover: net of " + std::to_string(cloud.size()) +
                            " points is too large for brute-force facets in dimension " +
                            std::to_string(C.dim),
                        0.0);
    }
    const auto idx = greedy_net(cloud, tol);
    std::vector<Point> net;
    for (std::size_t i : idx) net.push_back(cloud[i]);
    facets = hull_facets(net);
    double gap = 0.0;
    for (const Facet& f : facets) gap = std::max(gap, C.support(f.normal) - f.offset);
    ok = gap <= eps / 2.0;
  }
  if (!ok) throw InvariantError("convex cover: net refinement did not reach the support tolerance");

  CoverResult res;
  res.strips.push_back(strip_from_facets(facets, r, eps));
  res.total_width_bound = res.strips.front().width_bound;
  res.slack = 2.0 * eps;
  res.target = C.description + " r-neighbourhood minus interior, r=" + std::to_string(r);

  SampleStream s(opt.seed);
  const BoundingBox region = C.bbox.expanded(r);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 2000 * opt.samples + 1000;
  while (res.samples_checked < opt.samples && attempts < max_attempts) {
    ++attempts;
    const Point x = sample_in_box(region, s);
    const double sd = C.signed_distance(x);
    if (sd < kBand || sd >= r) continue;
    ++res.samples_checked;
    if (!member(res.strips.front(), x, opt.tol)) ++res.violations;
  }
  return res;
}

PolyhedralFunc convex_polyhedral_approx(const ScalarField& f, const BoundingBox& U, double eps,
                                        const ApproxOptions& opt) {
  if (!(eps > 0.0)) throw PreconditionError("convex_polyhedral_approx: eps must be positive");
  if (!(f.L >= 0.0)) throw PreconditionError("convex_polyhedral_approx: L must be non-negative");
  require_dim(f.dim, U.dim(), "convex_polyhedral_approx");
  const std::size_t d = f.dim;

  SampleStream s(opt.seed);
  for (std::size_t t = 0; t < opt.convexity_checks; ++t) {
    const Point a = sample_in_box(U, s);
    const Point b = sample_in_box(U, s);
    const Point m = (a + b) * 0.5;
    const double fa = f.value(a);
    const double fb = f.value(b);
    const double fm = f.value(m);
    if (fm > 0.5 * (fa + fb) + 1e-9 * (1.0 + std::abs(fm))) {
      throw PreconditionError("convex_polyhedral_approx: midpoint convexity fails for a=" +
                              to_string(a) + ", b=" + to_string(b) + ", midpoint=" + to_string(m));
    }
  }

  std::vector<Point> net;
  if (opt.net) {
    net = *opt.net;
  } else {
    const double spacing = f.L > 0.0 ? eps / (f.L * std::sqrt(static_cast<double>(d)))
                                     : std::numeric_limits<double>::infinity();
    std::vector<std::size_t> counts(d);
    double total = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double ext = U.high[k] - U.low[k];
      counts[k] = std::isfinite(spacing) ? std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(ext / spacing))) : 1;
      total *= static_cast<double>(counts[k]);
    }
    if (total > 2e6) {
      throw BudgetError("convex_polyhedral_approx: net of " + std::to_string(total) +
                            " points is too large; raise eps",
                        0.0);
    }
    std::vector<std::size_t> idx(d, 0);
    for (;;) {
      Point p(d);
      for (std::size_t k = 0; k < d; ++k) {
        const double ext = U.high[k] - U.low[k];
        p[k] = U.low[k] + ext * (static_cast<double>(idx[k]) + 0.5) / static_cast<double>(counts[k]);
      }
      net.push_back(p);
      std::size_t k = 0;
      while (k < d && ++idx[k] == counts[k]) idx[k++] = 0;
      if (k == d) break;
    }
  }

  const double h = 1e-6 * std::max(U.max_extent(), 1e-12);
  std::vector<double> grads;
  std::vector<double> offs;
  for (const Point& xi : net) {
    require_dim(d, xi.dim(), "convex_polyhedral_approx net");
    Point v = f.subgradient(xi, h);
    const double nv = v.norm();
    if (nv > f.L) {
      if (nv > f.L * (1.0 + 1e-6) + 1e-12) {
        throw PreconditionError("convex_polyhedral_approx: subgradient norm " + std::to_string(nv) +
                                " at " + to_string(xi) + " exceeds the declared L=" +
                                std::to_string(f.L));
      }
      v *= f.L / nv;
      // Rounding can leave the rescaled norm a hair above L.
      while (v.norm() > f.L) v *= (1.0 - 1e-15);
    }
    grads.insert(grads.end(), v.coords().begin(), v.coords().end());
    offs.push_back(f.value(xi) - dot(v, xi));
  }
  return PolyhedralFunc(d, std::move(grads), std::move(offs));
}

GenStrip dc_graph_cover(const PolyhedralFunc& g, const PolyhedralFunc& h, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("dc_graph_cover: eps must be positive");
  require_dim(g.dim(), h.dim(), "dc_graph_cover");
  if (g.dim() + 1 > kMaxDim) throw PreconditionError("dc_graph_cover: lifted dimension exceeds 8");
  const double third = 1.0 / 3.0;
  if (g.lip() > third) {
    throw PreconditionError("dc_graph_cover: lip(g) = " + std::to_string(g.lip()) + " exceeds 1/3");
  }
  if (h.lip() > third) {
    throw PreconditionError("dc_graph_cover: lip(h) = " + std::to_string(h.lip()) + " exceeds 1/3");
  }
  const std::size_t n = g.dim();
  const std::size_t d = n + 1;
  std::vector<double> grads;
  std::vector<double> offs;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (double a : g.gradient(i)) grads.push_back(4.0 * eps * a);
    grads.push_back(-2.0 * eps);
    offs.push_back(4.0 * eps * g.offset(i));
  }
  for (std::size_t j = 0; j < h.size(); ++j) {
    for (double b : h.gradient(j)) grads.push_back(4.0 * eps * b);
    grads.push_back(2.0 * eps);
    offs.push_back(4.0 * eps * h.offset(j));
  }
  return GenStrip(PolyhedralFunc(d, std::move(grads), std::move(offs)));
}

CoverResult surface_cover(const ScalarField& f, const BoundingBox& W, double eps,
                          const SurfaceCoverOptions& opt) {
  if (!(eps > 0.0)) throw PreconditionError("surface_cover: eps must be positive");
  require_dim(f.dim, W.dim(), "surface_cover");
  if (!f.M || !(*f.M > 0.0)) throw PreconditionError("surface_cover: a positive gradient Lipschitz constant M is required");
  const double M = *f.M;
  const double radius = 1.0 / (6.0 * M);
  for (const Point& c : W.corners()) {
    if (c.norm() > radius) {
      throw PreconditionError("surface_cover: W is not inside B(0, 1/(6M)); corner " + to_string(c) +
                              " has norm " + std::to_string(c.norm()) + " > " + std::to_string(radius));
    }
  }
  const double h = 1e-6 * std::max(W.max_extent(), 1e-12);
  SampleStream gs(opt.seed ^ 0x9a7d);
  std::vector<Point> probes = W.corners();
  probes.push_back(W.center());
  for (std::size_t t = 0; t < opt.gradient_checks; ++t) probes.push_back(sample_in_box(W, gs));
  for (const Point& p : probes) {
    const double gn = f.subgradient(p, h).norm();
    if (gn > 1.0 / 6.0) {
      throw PreconditionError("surface_cover: |grad f| = " + std::to_string(gn) + " > 1/6 at " +
                              to_string(p));
    }
  }

  ScalarField g;
  g.dim = f.dim;
  g.L = 1.0 / 3.0;
  g.value = [f, M](const Point& x) { return f.value(x) + 0.5 * M * x.squared_norm(); };
  if (f.gradient) g.gradient = [f, M](const Point& x) { return f.gradient(x) + x * M; };
  ScalarField q;
  q.dim = f.dim;
  q.L = 1.0 / 3.0;
  q.value = [M](const Point& x) { return 0.5 * M * x.squared_norm(); };
  q.gradient = [M](const Point& x) { return x * M; };

  ApproxOptions aopt;
  aopt.seed = opt.seed;
  const PolyhedralFunc gt = convex_polyhedral_approx(g, W, eps, aopt);
  const PolyhedralFunc ht = convex_polyhedral_approx(q, W, eps, aopt);

  CoverResult res;
  res.strips.push_back(dc_graph_cover(gt, ht, 2.0 * eps));
  res.total_width_bound = res.strips.front().width_bound;
  if (res.total_width_bound > 16.0 * eps) {
    throw InvariantError("surface_cover: width bound exceeds 16 eps");
  }
  res.target = "graph of " + (f.description.empty() ? std::string("f") : f.description);

  SampleStream s(opt.seed);
  res.convexity_violations = midpoint_convexity_violations(g, W, opt.samples, s);
  for (std::size_t t = 0; t < opt.samples; ++t) {
    const Point x = sample_in_box(W, s);
    Point z(f.dim + 1);
    for (std::size_t k = 0; k < f.dim; ++k) z[k] = x[k];
    z[f.dim] = f.value(x);
    ++res.samples_checked;
    if (!member(res.strips.front(), z, opt.tol)) ++res.violations;
  }
  return res;
}

CoverResult radial_cover(std::span<const RadialInterval> intervals, double eps,
                         const RadialCoverOptions& opt) {
  if (!(eps > 0.0)) throw PreconditionError("radial_cover: eps must be positive");
  std::vector<RadialInterval> iv(intervals.begin(), intervals.end());
  for (const RadialInterval& i : iv) {
    if (!(i.lo > 0.0) || !(i.hi > i.lo) || !std::isfinite(i.hi)) {
      throw PreconditionError("radial_cover: intervals must satisfy 0 < lo < hi < inf");
    }
  }
  std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < iv.size(); ++i) {
    if (iv[i].lo <= iv[i - 1].hi) throw PreconditionError("radial_cover: intervals must be disjoint");
  }

  CoverResult res;
  res.target = "radial shells";
  res.slack = 2.0 * static_cast<double>(iv.size()) * eps;
  double length = 0.0;
  ConvexCoverOptions copt;
  copt.samples = 0;
  copt.tol = opt.tol;
  // Each shell uses a slightly smaller eps so that rounding in the sum of
  // widths cannot push the total past 2 L + 2 n eps.
  const double eps_shell = eps * (1.0 - 1e-9);
  for (const RadialInterval& i : iv) {
    const ConvexBody ball = ConvexBody::ball(Point(opt.dim), i.lo);
    CoverResult c = convex_neighborhood_cover(ball, i.hi - i.lo, eps_shell, copt);
    res.strips.push_back(c.strips.front());
    res.total_width_bound += c.strips.front().width_bound;
    length += i.hi - i.lo;
  }
  if (res.total_width_bound > 2.0 * length + res.slack) {
    throw InvariantError("radial_cover: width bound exceeds 2 L + slack");
  }

  SampleStream s(opt.seed);
  for (std::size_t i = 0; i < iv.size(); ++i) {
    const std::size_t n = opt.samples / iv.size() + (i < opt.samples % iv.size() ? 1 : 0);
    for (std::size_t t = 0; t < n; ++t) {
      const Point x = sample_shell(opt.dim, iv[i].lo, iv[i].hi, s);
      ++res.samples_checked;
      if (!member(res.strips[i], x, opt.tol)) ++res.violations;
    }
  }
  return res;
}

std::size_t midpoint_convexity_violations(const ScalarField& f, const BoundingBox& U, std::size_t n,
                                          SampleStream& stream) {
  std::size_t bad = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const Point a = sample_in_box(U, stream);
    const Point b = sample_in_box(U, stream);
    const double fm = f.value((a + b) * 0.5);
    if (fm > 0.5 * (f.value(a) + f.value(b)) + 1e-9 * (1.0 + std::abs(fm))) ++bad;
  }
  return bad;
}

}  // namespace kolmo
