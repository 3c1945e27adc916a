#include "kolmo/hull.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "kolmo/detail/simplex_qp.hpp"

namespace kolmo {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double orient(const Point& a, const Point& b, const Point& c) { return cross(a, b, c); }

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

std::vector<Point> convex_hull_2d(std::vector<Point> pts) {
  for (const Point& p : pts) require_dim(2, p.dim(), "convex_hull_2d");
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

std::size_t affine_rank(std::span<const Point> pts, double rel_tol) {
  if (pts.empty()) return 0;
  const std::size_t d = pts[0].dim();
  Eigen::MatrixXd D(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      D(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = pts[j][k] - pts[0][k];
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++r;
  }
  return r;
}

std::vector<Facet> hull_facets(std::span<const Point> pts) {
  if (pts.empty()) throw PreconditionError("hull_facets: empty point set");
  const std::size_t d = pts[0].dim();
  if (affine_rank(pts) < d) {
    throw PreconditionError("hull_facets: points span a lower-dimensional set; thicken the input");
  }
  std::vector<Facet> out;
  if (d == 1) {
    double lo = pts[0][0];
    double hi = pts[0][0];
    for (const Point& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    out.push_back({Point{1.0}, hi});
    out.push_back({Point{-1.0}, -lo});
    return out;
  }
  if (d == 2) {
    const auto h = convex_hull_2d(std::vector<Point>(pts.begin(), pts.end()));
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Point& a = h[i];
      const Point& b = h[(i + 1) % h.size()];
      const Point n{b[1] - a[1], a[0] - b[0]};
      const Hyperplane hp = Hyperplane::from_unnormalized(n, dot(n, a));
      out.push_back({hp.normal, hp.offset});
    }
    return out;
  }

  double scale = 0.0;
  for (const Point& p : pts) scale = std::max(scale, p.norm());
  const double tol = 1e-10 * (1.0 + scale);
  std::vector<std::size_t> idx(d);
  auto emit = [&]() {
    Eigen::MatrixXd E(static_cast<Eigen::Index>(d - 1), static_cast<Eigen::Index>(d));
    for (std::size_t r = 1; r < d; ++r) {
      for (std::size_t k = 0; k < d; ++k) {
        E(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(k)) = pts[idx[r]][k] - pts[idx[0]][k];
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    lu.setThreshold(1e-10);
    if (lu.rank() < static_cast<Eigen::Index>(d - 1)) return;
    const Eigen::MatrixXd ker = lu.kernel();
    Point n(d);
    for (std::size_t k = 0; k < d; ++k) n[k] = ker(static_cast<Eigen::Index>(k), 0);
    n /= n.norm();
    double b = dot(n, pts[idx[0]]);
    bool above = false;
    bool below = false;
    for (const Point& p : pts) {
      const double s = dot(n, p) - b;
      if (s > tol) above = true;
      if (s < -tol) below = true;
      if (above && below) return;
    }
    if (above) {
      n = -n;
      b = -b;
    }
    for (const Facet& f : out) {
      if ((f.normal - n).norm() < 1e-9 && std::abs(f.offset - b) < tol) return;
    }
    out.push_back({n, b});
  };
  auto recurse = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == d) {
      emit();
      return;
    }
    for (std::size_t i = start; i < pts.size(); ++i) {
      idx[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

std::vector<std::size_t> greedy_net(std::span<const Point> pts, double radius) {
  std::vector<std::size_t> net;
  if (pts.empty()) return net;
  std::vector<double> dist(pts.size(), std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  for (;;) {
    const std::size_t cur = next;
    net.push_back(cur);
    double far = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      dist[i] = std::min(dist[i], distance(pts[i], pts[cur]));
      if (dist[i] > far) {
        far = dist[i];
        next = i;
      }
    }
    if (far <= radius) break;
  }
  return net;
}

double distance_to_hull(std::span<const Point> pts, const Point& x) {
  if (pts.empty()) throw PreconditionError("distance_to_hull: empty point set");
  const std::size_t d = x.dim();
  std::vector<double> grads;
  grads.reserve(pts.size() * d);
  for (const Point& p : pts) {
    require_dim(d, p.dim(), "distance_to_hull");
    grads.insert(grads.end(), p.coords().begin(), p.coords().end());
  }
  detail::SimplexQp qp{grads, {}, d, pts.size()};
  auto res = detail::solve_active_set(qp, x);
  if (!res.converged && pts.size() <= 12) res = detail::solve_exhaustive(qp, x);
  return res.y.norm();
}

double facet_max(std::span<const Facet> facets, const Point& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const Facet& f : facets) m = std::max(m, dot(f.normal, x) - f.offset);
  return m;
}

double segment_distance(const Point& a, const Point& b, const Point& x) {
  const Point ab = b - a;
  const double len2 = ab.squared_norm();
  double t = len2 > 0.0 ? dot(x - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return distance(x, a + ab * t);
}

bool point_in_polygon(std::span<const Point> poly, const Point& x) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      const double xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
      if (x[0] < xc) inside = !inside;
    }
  }
  return inside;
}

double polygon_signed_distance(std::span<const Point> poly, const Point& x) {
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    dmin = std::min(dmin, segment_distance(poly[i], poly[(i + 1) % poly.size()], x));
  }
  return point_in_polygon(poly, x) ? -dmin : dmin;
}

double polygon_area(std::span<const Point> poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return std::abs(a) / 2.0;
}

bool polygon_self_intersects(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return true;
    }
  }
  return false;
}

}  // namespace kolmo
