#include "kolmo/setlib.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "kolmo/errors.hpp"
#include "kolmo/hull.hpp"

namespace kolmo {

namespace {

Membership classify(double signed_dist) {
  if (std::abs(signed_dist) <= kBoundaryBand) return Membership::boundary;
  return signed_dist < 0.0 ? Membership::inside : Membership::outside;
}

// Line through a and b with a canonical normal sign, so repeated lines compare equal.
Hyperplane line_through(const Point& a, const Point& b) {
  Point n{b[1] - a[1], a[0] - b[0]};
  n /= n.norm();
  if (n[0] < -1e-12 || (std::abs(n[0]) <= 1e-12 && n[1] < 0.0)) n = -n;
  return {n, dot(n, a)};
}

std::vector<Hyperplane> dedup_planes(std::vector<Hyperplane> planes) {
  auto key = [](const Hyperplane& h) { return std::atan2(h.normal[1], h.normal[0]); };
  std::sort(planes.begin(), planes.end(), [&](const Hyperplane& a, const Hyperplane& b) {
    const double ka = key(a);
    const double kb = key(b);
    if (std::abs(ka - kb) > 1e-9) return ka < kb;
    return a.offset < b.offset;
  });
  std::vector<Hyperplane> out;
  for (const Hyperplane& h : planes) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && std::abs(key(*it) - key(h)) <= 1e-9; ++it) {
      if (std::abs(it->offset - h.offset) <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(h);
  }
  return out;
}

std::vector<Point> sample_polyline(const std::vector<Point>& v, const std::vector<double>& cum,
                                   std::size_t n, SampleStream& s) {
  std::vector<Point> out;
  out.reserve(n);
  const double total = cum.back();
  for (std::size_t t = 0; t < n; ++t) {
    const double u = s.uniform() * total;
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) - 1;
    const std::size_t e = std::min(i, v.size() - 1);
    const Point& a = v[e];
    const Point& b = v[(e + 1) % v.size()];
    const double len = cum[e + 1] - cum[e];
    const double lam = len > 0.0 ? std::clamp((u - cum[e]) / len, 0.0, 1.0) : 0.0;
    out.push_back(a + (b - a) * lam);
  }
  return out;
}

BoundingBox bbox_of(const std::vector<Point>& pts) {
  Point lo = pts[0];
  Point hi = pts[0];
  for (const Point& p : pts) {
    for (std::size_t k = 0; k < p.dim(); ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  return BoundingBox::make(lo, hi);
}

double unit_ball_volume(std::size_t d) {
  const double h = static_cast<double>(d) / 2.0;
  return std::pow(std::numbers::pi, h) / std::tgamma(h + 1.0);
}

// Polygon set without convexity or area shortcuts; callers fill those in.
SetSpec polygon_set(std::string name, std::vector<Point> v) {
  SetSpec A;
  A.name = std::move(name);
  A.dim = 2;
  A.bbox = bbox_of(v);
  auto verts = std::make_shared<const std::vector<Point>>(std::move(v));
  auto cum = std::make_shared<std::vector<double>>(1, 0.0);
  std::vector<Hyperplane> planes;
  for (std::size_t i = 0; i < verts->size(); ++i) {
    const Point& a = (*verts)[i];
    const Point& b = (*verts)[(i + 1) % verts->size()];
    cum->push_back(cum->back() + distance(a, b));
    planes.push_back(line_through(a, b));
  }
  A.perimeter = cum->back();
  A.exact_area = polygon_area(*verts);
  A.boundary_planes = dedup_planes(std::move(planes));
  A.membership = [verts](const Point& x) { return classify(polygon_signed_distance(*verts, x)); };
  A.boundary_sampler = [verts, cum](std::size_t n, SampleStream& s) {
    return sample_polyline(*verts, *cum, n, s);
  };
  return A;
}

bool is_convex_polygon(const std::vector<Point>& v) {
  int sign = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const Point& c = v[(i + 2) % v.size()];
    const double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
    if (std::abs(cr) <= 1e-14) continue;
    const int s = cr > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
  }
  return true;
}

}  // namespace

SetSpec make_square() {
  const BoundingBox bb = BoundingBox::unit(2);
  std::vector<Point> v{Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}};
  SetSpec A = polygon_set("square", v);
  A.exact_area = 1.0;
  A.convex = ConvexBody::box(bb);
  A.membership = [bb](const Point& x) {
    require_dim(2, x.dim(), "square membership");
    double in = -1e300;
    double out2 = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      const double q = std::max(bb.low[k] - x[k], x[k] - bb.high[k]);
      if (q > 0.0) out2 += q * q;
      in = std::max(in, q);
    }
    return classify(out2 > 0.0 ? std::sqrt(out2) : in);
  };
  return A;
}

SetSpec make_disk(double r, const Point& center) {
  if (!(r > 0.0) || !std::isfinite(r)) throw PreconditionError("disk: radius must be positive and finite");
  require_dim(2, center.dim(), "make_disk");
  SetSpec A;
  A.name = "disk(r=" + std::to_string(r) + ")";
  A.dim = 2;
  A.bbox = BoundingBox::make(center - Point{r, r}, center + Point{r, r});
  A.exact_area = std::numbers::pi * r * r;
  A.perimeter = 2.0 * std::numbers::pi * r;
  A.convex = ConvexBody::ball(center, r);
  A.membership = [center, r](const Point& x) { return classify(distance(x, center) - r); };
  A.boundary_sampler = [center, r](std::size_t n, SampleStream& s) {
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double th = 2.0 * std::numbers::pi * s.uniform();
      out.push_back(center + Point{r * std::cos(th), r * std::sin(th)});
    }
    return out;
  };
  return A;
}

SetSpec make_polygon(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw PreconditionError("polygon: need at least 3 vertices");
  for (const Point& p : vertices) {
    require_dim(2, p.dim(), "make_polygon");
    if (!p.is_finite()) throw PreconditionError("polygon: non-finite vertex");
  }
  if (polygon_self_intersects(vertices)) throw PreconditionError("polygon: edges self-intersect");
  if (polygon_area(vertices) <= 0.0) throw PreconditionError("polygon: zero area");
  const bool convex = is_convex_polygon(vertices);
  SetSpec A = polygon_set("polygon(" + std::to_string(vertices.size()) + ")", vertices);
  if (convex) A.convex = ConvexBody::from_points(std::move(vertices));
  return A;
}

std::vector<Point> koch_vertices(int depth) {
  if (depth < 0 || depth > 8) throw PreconditionError("koch: depth must be in 0..8");
  std::vector<Point> v{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.5, std::sqrt(3.0) / 2.0}};
  const double c = 0.5;
  const double s = -std::sqrt(3.0) / 2.0;
  for (int level = 0; level < depth; ++level) {
    std::vector<Point> next;
    next.reserve(4 * v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Point& a = v[i];
      const Point& b = v[(i + 1) % v.size()];
      const Point d = (b - a) / 3.0;
      const Point p1 = a + d;
      const Point peak = p1 + Point{c * d[0] - s * d[1], s * d[0] + c * d[1]};
      next.push_back(a);
      next.push_back(p1);
      next.push_back(peak);
      next.push_back(a + d * 2.0);
    }
    v = std::move(next);
  }
  return v;
}

double koch_area(int depth) {
  const double tri = std::sqrt(3.0) / 4.0;
  double area = tri;
  for (int n = 1; n <= depth; ++n) {
    area += 3.0 * std::pow(4.0, n - 1) * tri * std::pow(9.0, -n);
  }
  return area;
}

SetSpec make_koch(int depth) {
  SetSpec A = polygon_set("koch(k=" + std::to_string(depth) + ")", koch_vertices(depth));
  A.exact_area = koch_area(depth);
  if (depth == 0) A.convex = ConvexBody::from_points(koch_vertices(0));
  return A;
}

bool carpet_cell_kept(std::size_t i, std::size_t j, int depth) {
  for (int l = 0; l < depth; ++l) {
    if (i % 3 == 1 && j % 3 == 1) return false;
    i /= 3;
    j /= 3;
  }
  return true;
}

SetSpec make_carpet(int depth) {
  if (depth < 0 || depth > 6) throw PreconditionError("carpet: depth must be in 0..6");
  const std::size_t n = static_cast<std::size_t>(std::llround(std::pow(3.0, depth)));
  const double h = 1.0 / static_cast<double>(n);
  auto kept = [n, depth](long i, long j) {
    if (i < 0 || j < 0 || i >= static_cast<long>(n) || j >= static_cast<long>(n)) return false;
    return carpet_cell_kept(static_cast<std::size_t>(i), static_cast<std::size_t>(j), depth);
  };

  // Boundary edges: sides of kept cells whose neighbour is not kept.
  auto edges = std::make_shared<std::vector<std::pair<Point, Point>>>();
  std::vector<bool> xline(n + 1, false);
  std::vector<bool> yline(n + 1, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const long li = static_cast<long>(i);
      const long lj = static_cast<long>(j);
      if (!kept(li, lj)) continue;
      const double x0 = static_cast<double>(i) * h;
      const double y0 = static_cast<double>(j) * h;
      if (!kept(li - 1, lj)) {
        edges->push_back({Point{x0, y0}, Point{x0, y0 + h}});
        xline[i] = true;
      }
      if (!kept(li + 1, lj)) {
        edges->push_back({Point{x0 + h, y0}, Point{x0 + h, y0 + h}});
        xline[i + 1] = true;
      }
      if (!kept(li, lj - 1)) {
        edges->push_back({Point{x0, y0}, Point{x0 + h, y0}});
        yline[j] = true;
      }
      if (!kept(li, lj + 1)) {
        edges->push_back({Point{x0, y0 + h}, Point{x0 + h, y0 + h}});
        yline[j + 1] = true;
      }
    }
  }

  SetSpec A;
  A.name = "carpet(k=" + std::to_string(depth) + ")";
  A.dim = 2;
  A.bbox = BoundingBox::unit(2);
  A.exact_area = std::pow(8.0 / 9.0, depth);
  A.perimeter = static_cast<double>(edges->size()) * h;
  for (std::size_t i = 0; i <= n; ++i) {
    if (xline[i]) A.boundary_planes.push_back({Point{1.0, 0.0}, static_cast<double>(i) * h});
  }
  for (std::size_t j = 0; j <= n; ++j) {
    if (yline[j]) A.boundary_planes.push_back({Point{0.0, 1.0}, static_cast<double>(j) * h});
  }
  A.membership = [kept, n](const Point& x) {
    require_dim(2, x.dim(), "carpet membership");
    const double scale = static_cast<double>(n);
    auto at = [&](double px, double py) {
      if (px < 0.0 || py < 0.0 || px > 1.0 || py > 1.0) return false;
      const long i = std::min(static_cast<long>(px * scale), static_cast<long>(n) - 1);
      const long j = std::min(static_cast<long>(py * scale), static_cast<long>(n) - 1);
      return kept(i, j);
    };
    int hits = 0;
    for (double dx : {-kBoundaryBand, kBoundaryBand}) {
      for (double dy : {-kBoundaryBand, kBoundaryBand}) hits += at(x[0] + dx, x[1] + dy) ? 1 : 0;
    }
    if (hits == 4) return Membership::inside;
    return hits == 0 ? Membership::outside : Membership::boundary;
  };
  A.boundary_sampler = [edges](std::size_t count, SampleStream& s) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
      const auto& e = (*edges)[s.index(edges->size())];
      out.push_back(e.first + (e.second - e.first) * s.uniform());
    }
    return out;
  };
  return A;
}

SetSpec make_radial(std::vector<RadialInterval> intervals, std::size_t dim) {
  if (intervals.empty()) throw PreconditionError("radial: need at least one interval");
  if (dim < 1 || dim > kMaxDim) throw PreconditionError("radial: dimension must be in 1..8");
  std::sort(intervals.begin(), intervals.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (!(iv.lo > 0.0) || !(iv.hi > iv.lo) || !std::isfinite(iv.hi)) {
      throw PreconditionError("radial: intervals must satisfy 0 < lo < hi < inf");
    }
    if (i > 0 && iv.lo <= intervals[i - 1].hi) throw PreconditionError("radial: intervals must be disjoint");
  }
  const double R = intervals.back().hi;
  const double dd = static_cast<double>(dim);
  SetSpec A;
  A.name = "radial(" + std::to_string(intervals.size()) + " shells)";
  A.dim = dim;
  Point lo(dim);
  Point hi(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    lo[k] = -R;
    hi[k] = R;
  }
  A.bbox = BoundingBox::make(lo, hi);
  double vol = 0.0;
  double area = 0.0;
  std::vector<double> radii;
  std::vector<double> weights;
  for (const auto& iv : intervals) {
    vol += std::pow(iv.hi, dd) - std::pow(iv.lo, dd);
    area += std::pow(iv.hi, dd - 1.0) + std::pow(iv.lo, dd - 1.0);
    radii.push_back(iv.lo);
    radii.push_back(iv.hi);
    weights.push_back(std::pow(iv.lo, dd - 1.0));
    weights.push_back(std::pow(iv.hi, dd - 1.0));
  }
  A.exact_area = unit_ball_volume(dim) * vol;
  A.perimeter = dd * unit_ball_volume(dim) * area;
  A.radial = intervals;
  A.membership = [intervals](const Point& x) {
    const double rho = x.norm();
    for (const auto& iv : intervals) {
      if (std::abs(rho - iv.lo) <= kBoundaryBand || std::abs(rho - iv.hi) <= kBoundaryBand) {
        return Membership::boundary;
      }
      if (rho > iv.lo && rho < iv.hi) return Membership::inside;
    }
    return Membership::outside;
  };
  std::vector<double> cum{0.0};
  for (double w : weights) cum.push_back(cum.back() + w);
  A.boundary_sampler = [radii, cum, dim](std::size_t n, SampleStream& s) {
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
      const double u = s.uniform() * cum.back();
      std::size_t i = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) - 1;
      i = std::min(i, radii.size() - 1);
      out.push_back(sample_direction(dim, s) * radii[i]);
    }
    return out;
  };
  return A;
}

SetSpec make_subgraph(const ScalarField& f, const BoundingBox& W) {
  require_dim(f.dim, W.dim(), "make_subgraph");
  const std::size_t n = f.dim;
  const std::size_t d = n + 1;
  if (d > kMaxDim) throw PreconditionError("subgraph: dimension exceeds 8");
  const double fc = f.value(W.center());
  const double spread = f.L * 2.0 * W.half_diagonal();
  const double bottom = fc - spread - 1.0;
  const double top = fc + spread;

  SetSpec A;
  A.name = "subgraph(" + (f.description.empty() ? std::string("f") : f.description) + ")";
  A.dim = d;
  Point lo(d);
  Point hi(d);
  for (std::size_t k = 0; k < n; ++k) {
    lo[k] = W.low[k];
    hi[k] = W.high[k];
  }
  lo[n] = bottom;
  hi[n] = top;
  A.bbox = BoundingBox::make(lo, hi);
  A.graph = f;
  A.graph_domain = W;
  for (std::size_t k = 0; k < n; ++k) {
    Point e(d);
    e[k] = 1.0;
    A.boundary_planes.push_back({e, W.low[k]});
    A.boundary_planes.push_back({e, W.high[k]});
  }
  Point ey(d);
  ey[n] = 1.0;
  A.boundary_planes.push_back({ey, bottom});
  A.membership = [f, W, bottom, n](const Point& x) {
    Point u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = x[k];
    // Signed distance to each face is replaced by the vertical gap for the
    // graph face; this classifies the band exactly on the graph itself.
    double m = bottom - x[n];
    for (std::size_t k = 0; k < n; ++k) m = std::max({m, W.low[k] - x[k], x[k] - W.high[k]});
    Point uc = u;
    for (std::size_t k = 0; k < n; ++k) uc[k] = std::clamp(u[k], W.low[k], W.high[k]);
    m = std::max(m, x[n] - f.value(uc));
    return classify(m);
  };
  A.boundary_sampler = [f, W, n](std::size_t count, SampleStream& s) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
      const Point u = sample_in_box(W, s);
      Point z(n + 1);
      for (std::size_t k = 0; k < n; ++k) z[k] = u[k];
      z[n] = f.value(u);
      out.push_back(z);
    }
    return out;
  };
  return A;
}

AreaEstimate area_monte_carlo(const SetSpec& A, std::size_t n, SampleStream& stream) {
  if (n < 100) throw PreconditionError("area_monte_carlo: need at least 100 samples");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (A.contains(sample_in_box(A.bbox, stream))) ++hits;
  }
  const double vol = A.bbox.volume();
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {vol * p, vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace kolmo
