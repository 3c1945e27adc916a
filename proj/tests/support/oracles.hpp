#pragma once

// Reference implementations used only by tests. None of them call into the
// solver paths they are checked against.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "kolmo/geom.hpp"
#include "kolmo/polyfun.hpp"

namespace oracle {

using kolmo::Point;
using kolmo::PolyhedralFunc;

inline double inner(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) s += a[k] * b[k];
  return s;
}

inline double length(const Point& a) { return std::sqrt(inner(a, a)); }

inline double gap(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline double piece(const PolyhedralFunc& f, std::size_t i, const Point& x) {
  double s = f.offset(i);
  const auto g = f.gradient(i);
  for (std::size_t k = 0; k < x.dim(); ++k) s += g[k] * x[k];
  return s;
}

inline double value(const PolyhedralFunc& f, const Point& x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, piece(f, i, x));
  return best;
}

inline double lip(const PolyhedralFunc& f) {
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) best = std::max(best, length(f.gradient_point(i)));
  return best;
}

inline double prox_objective(const PolyhedralFunc& f, const Point& x, const Point& y) {
  const double d = gap(x, y);
  return value(f, y) + 0.5 * d * d;
}

/// Exact prox by enumerating candidate active sets of size <= d + 1. For a
/// set K the optimality system y = x - sum lambda_j v_j, f_i(y) = t (i in K),
/// sum lambda = 1 is linear in (lambda, t). A candidate is accepted when
/// lambda >= 0 and no other piece exceeds t; the unique prox is the accepted
/// candidate of least objective. Exponential in the piece count, so only for
/// small instances.
inline std::optional<Point> prox_enumerate(const PolyhedralFunc& f, const Point& x, double slack = 1e-10) {
  const std::size_t n = f.size();
  const std::size_t d = f.dim();
  const std::size_t kmax = std::min(n, d + 1);
  std::optional<Point> best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> K;
  auto try_set = [&] {
    const std::size_t m = K.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
    for (std::size_t r = 0; r < m; ++r) {
      const Point vr = f.gradient_point(K[r]);
      for (std::size_t c = 0; c < m; ++c) A(r, c) = inner(vr, f.gradient_point(K[c]));
      A(r, m) = 1.0;
      b(r) = piece(f, K[r], x);
    }
    for (std::size_t c = 0; c < m; ++c) A(m, c) = 1.0;
    b(m) = 1.0;
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd sol = lu.solve(b);
    for (std::size_t c = 0; c < m; ++c) {
      if (sol(c) < -slack) return;
    }
    Point y = x;
    for (std::size_t c = 0; c < m; ++c) y -= sol(c) * f.gradient_point(K[c]);
    const double t = piece(f, K[0], y);
    if (value(f, y) > t + slack * (1.0 + std::abs(t))) return;
    const double obj = prox_objective(f, x, y);
    if (obj < best_obj) {
      best_obj = obj;
      best = y;
    }
  };
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!K.empty()) try_set();
    if (K.size() == kmax) return;
    for (std::size_t i = start; i < n; ++i) {
      K.push_back(i);
      self(self, i + 1);
      K.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

inline bool slab_contains(const Point& normal, double center, double width, const Point& x) {
  return std::abs(inner(normal, x) - center) <= width / 2.0;
}

inline double slab_boundary_distance(const Point& normal, double center, double width, const Point& x) {
  return std::abs(std::abs(inner(normal, x) - center) - width / 2.0);
}

/// Euclidean distance from x to the axis box [lo, hi]; 0 inside.
inline double box_distance(const Point& lo, const Point& hi, const Point& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.dim(); ++k) {
    const double e = std::max({lo[k] - x[k], 0.0, x[k] - hi[k]});
    s += e * e;
  }
  return std::sqrt(s);
}

/// The line a0 x + a1 y = b.
struct Line {
  double a0, a1, b;
};

inline double line_distance(const Line& l, const Point& p) {
  return std::abs(l.a0 * p[0] + l.a1 * p[1] - l.b) / std::hypot(l.a0, l.a1);
}

/// Uniform point of the triangle abc, kept at least `inset` (in barycentric
/// weight) away from every edge.
inline Point triangle_sample(const Point& a, const Point& b, const Point& c, double u, double v,
                             double inset) {
  if (u + v > 1.0) {
    u = 1.0 - u;
    v = 1.0 - v;
  }
  const double s = 1.0 - 3.0 * inset;
  const double wa = inset + s * (1.0 - u - v);
  const double wb = inset + s * u;
  const double wc = inset + s * v;
  return wa * a + wb * b + wc * c;
}

/// Monte-Carlo mean and standard error of an indicator.
struct Proportion {
  double mean;
  double stderr_;
};

inline Proportion proportion(std::size_t hits, std::size_t n) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n))};
}

inline double unit_sphere_area(std::size_t d) {
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

}  // namespace oracle
