#include "kolmo/polyfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kolmo/detail/simplex_qp.hpp"

namespace kolmo {

void Tolerances::validate() const {
  if (!(act_tol > 0.0) || !(grad_tol > 0.0) || !(cert_tol > 0.0)) {
    throw PreconditionError("tolerances must be strictly positive");
  }
}

PolyhedralFunc::PolyhedralFunc(std::size_t dim, const std::vector<AffineFunc>& pieces)
    : dim_(dim) {
  grads_.reserve(pieces.size() * dim);
  offsets_.reserve(pieces.size());
  for (const AffineFunc& p : pieces) {
    require_dim(dim, p.dim(), "PolyhedralFunc");
    for (std::size_t k = 0; k < dim; ++k) grads_.push_back(p.gradient[k]);
    offsets_.push_back(p.offset);
  }
  validate();
}

PolyhedralFunc::PolyhedralFunc(std::size_t dim, std::vector<double> gradients,
                               std::vector<double> offsets)
    : dim_(dim), grads_(std::move(gradients)), offsets_(std::move(offsets)) {
  validate();
}

void PolyhedralFunc::validate() {
  if (dim_ == 0 || dim_ > kMaxDim) {
    throw PreconditionError("polyhedral function dimension " + std::to_string(dim_) +
                            " outside 1.." + std::to_string(kMaxDim));
  }
  if (offsets_.empty()) throw PreconditionError("polyhedral function needs at least one piece");
  if (grads_.size() != offsets_.size() * dim_) {
    throw DimensionError(offsets_.size() * dim_, grads_.size(), "PolyhedralFunc gradients");
  }
  for (double v : grads_) {
    if (!std::isfinite(v)) throw PreconditionError("non-finite gradient entry");
  }
  for (double c : offsets_) {
    if (!std::isfinite(c)) throw PreconditionError("non-finite offset");
  }
  lip_ = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double n2 = 0.0;
    for (double v : gradient(i)) n2 += v * v;
    lip_ = std::max(lip_, std::sqrt(n2));
  }
}

PolyhedralFunc PolyhedralFunc::zero(std::size_t dim) {
  return PolyhedralFunc(dim, std::vector<double>(dim, 0.0), std::vector<double>{0.0});
}

std::vector<AffineFunc> PolyhedralFunc::pieces() const {
  std::vector<AffineFunc> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(piece(i));
  return out;
}

double PolyhedralFunc::piece_value(std::size_t i, const Point& x) const noexcept {
  const double* v = grads_.data() + i * dim_;
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) s += v[k] * x[k];
  return s + offsets_[i];
}

PolyhedralFunc PolyhedralFunc::plus_constant(double c) const {
  std::vector<double> off = offsets_;
  for (double& o : off) o += c;
  return PolyhedralFunc(dim_, grads_, std::move(off));
}

EvalResult eval(const PolyhedralFunc& f, const Point& x) {
  require_dim(f.dim(), x.dim(), "eval");
  EvalResult r{f.piece_value(0, x), 0};
  for (std::size_t i = 1; i < f.size(); ++i) {
    const double v = f.piece_value(i, x);
    if (v > r.value) r = {v, i};
  }
  return r;
}

std::vector<std::size_t> active_pieces(const PolyhedralFunc& f, const Point& y,
                                       const Tolerances& tol) {
  const double fy = eval(f, y).value;
  const double slack = tol.act_tol * (1.0 + std::abs(fy));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (fy - f.piece_value(i, y) <= slack) out.push_back(i);
  }
  return out;
}

double gradient_diameter(const PolyhedralFunc& f, std::span<const std::size_t> idx) {
  double diam2 = 0.0;
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const auto va = f.gradient(idx[a]);
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto vb = f.gradient(idx[b]);
      double d2 = 0.0;
      for (std::size_t k = 0; k < f.dim(); ++k) d2 += (va[k] - vb[k]) * (va[k] - vb[k]);
      diam2 = std::max(diam2, d2);
    }
  }
  return std::sqrt(diam2);
}

bool differentiable_at(const PolyhedralFunc& f, const Point& y, const Tolerances& tol) {
  const auto act = active_pieces(f, y, tol);
  return gradient_diameter(f, act) <= tol.grad_tol;
}

namespace {

double hull_distance(const PolyhedralFunc& f, std::span<const std::size_t> idx, const Point& g) {
  if (idx.size() == 1) return distance(g, f.gradient_point(idx[0]));
  std::vector<double> grads;
  grads.reserve(idx.size() * f.dim());
  for (std::size_t i : idx) {
    const auto v = f.gradient(i);
    grads.insert(grads.end(), v.begin(), v.end());
  }
  detail::SimplexQp qp{grads, {}, f.dim(), idx.size()};
  auto res = detail::solve_active_set(qp, g);
  if (!res.converged && idx.size() <= 12) res = detail::solve_exhaustive(qp, g);
  // res.y = g - V l, so its norm is the distance to the hull.
  return res.y.norm();
}

}  // namespace

CertificateResult subgradient_certificate(const PolyhedralFunc& f, const Point& x, const Point& y,
                                          const Tolerances& tol) {
  require_dim(f.dim(), x.dim(), "subgradient_certificate");
  require_dim(f.dim(), y.dim(), "subgradient_certificate");
  const auto act = active_pieces(f, y, tol);
  const double r = hull_distance(f, act, x - y);
  return {r <= tol.cert_tol, r};
}

ProxResult prox(const PolyhedralFunc& f, const Point& x, const Tolerances& tol,
                std::span<const std::size_t> warm) {
  require_dim(f.dim(), x.dim(), "prox");
  if (!x.is_finite()) throw PreconditionError("prox: non-finite input point");
  detail::SimplexQp qp{f.gradients(), f.offsets(), f.dim(), f.size()};
  auto sol = detail::solve_active_set(qp, x, warm);
  if (!sol.converged) {
    if (f.size() > 12) {
      throw SolverError("prox: dual solver reached its iteration cap (" +
                            std::to_string(sol.iterations) + " iterations, KKT gap " +
                            std::to_string(sol.kkt_gap) + ")",
                        sol.y, sol.kkt_gap, sol.iterations);
    }
    const std::size_t spent = sol.iterations;
    sol = detail::solve_exhaustive(qp, x);
    sol.iterations += spent;
  }

  ProxResult out;
  out.y = sol.y;
  out.iterations = sol.iterations;
  out.active = active_pieces(f, out.y, tol);
  for (std::size_t a = 0; a < sol.support.size(); ++a) {
    if (sol.weights[a] > 0.0 && !std::binary_search(out.active.begin(), out.active.end(),
                                                     sol.support[a])) {
      out.active.insert(std::lower_bound(out.active.begin(), out.active.end(), sol.support[a]),
                        sol.support[a]);
    }
  }
  out.dual_weights.assign(out.active.size(), 0.0);
  for (std::size_t a = 0; a < sol.support.size(); ++a) {
    const auto it = std::lower_bound(out.active.begin(), out.active.end(), sol.support[a]);
    out.dual_weights[static_cast<std::size_t>(it - out.active.begin())] += sol.weights[a];
  }
  out.differentiable = gradient_diameter(f, out.active) <= tol.grad_tol;
  out.certificate_residual = hull_distance(f, out.active, x - out.y);
  return out;
}

Point prox_oracle(const PolyhedralFunc& f, const Point& x, double grid_radius,
                  std::size_t levels) {
  require_dim(f.dim(), x.dim(), "prox_oracle");
  if (!(grid_radius >= f.lip())) {
    throw PreconditionError("prox_oracle: grid radius must be at least lip(f)");
  }
  if (grid_radius == 0.0 || levels == 0) return x;
  const std::size_t d = f.dim();
  const std::size_t n = d == 1 ? 201 : d == 2 ? 301 : d == 3 ? 61 : 9;

  // Nested 1-D grid refinement. Partial minimization of a convex function is
  // convex, so each axis minimizer lies within one step of its best node.
  // On the innermost axis every piece is affine in the free coordinate.
  const std::size_t m = f.size();
  std::vector<double> base(m);
  auto minimize_axis = [&](auto&& self, std::size_t k, Point& z) -> double {
    double lo = x[k] - grid_radius;
    double hi = x[k] + grid_radius;
    double quad = 0.0;
    if (k == 0) {
      for (std::size_t j = 1; j < d; ++j) quad += 0.5 * (z[j] - x[j]) * (z[j] - x[j]);
      for (std::size_t i = 0; i < m; ++i) {
        const auto v = f.gradient(i);
        double b = f.offset(i);
        for (std::size_t j = 1; j < d; ++j) b += v[j] * z[j];
        base[i] = b;
      }
    }
    double best_val = std::numeric_limits<double>::infinity();
    Point best = z;
    for (std::size_t level = 0; level < levels; ++level) {
      const double step = (hi - lo) / static_cast<double>(n - 1);
      std::size_t best_i = 0;
      best_val = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        const double t = i + 1 == n ? hi : lo + step * static_cast<double>(i);
        double v;
        Point w = z;
        w[k] = t;
        if (k == 0) {
          double fmax = -std::numeric_limits<double>::infinity();
          for (std::size_t p = 0; p < m; ++p) fmax = std::max(fmax, base[p] + f.gradient(p)[0] * t);
          v = fmax + quad + 0.5 * (t - x[0]) * (t - x[0]);
        } else {
          v = self(self, k - 1, w);
        }
        if (v < best_val) {
          best_val = v;
          best = w;
          best_i = i;
        }
      }
      const double t = best[k];
      lo = best_i == 0 ? t : t - step;
      hi = best_i + 1 == n ? t : t + step;
    }
    z = best;
    return best_val;
  };
  Point z = x;
  minimize_axis(minimize_axis, d - 1, z);
  return z;
}

}  // namespace kolmo
