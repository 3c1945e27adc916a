#include "kolmo/gstrip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kolmo/lp.hpp"

namespace kolmo {

GenStrip from_classical(const ClassicalStrip& s) {
  if (!(s.width > 0.0)) throw PreconditionError("from_classical: width must be positive");
  const double h = s.width / 2.0;
  const std::size_t d = s.normal.dim();
  std::vector<double> grads(2 * d);
  for (std::size_t k = 0; k < d; ++k) {
    grads[k] = h * s.normal[k];
    grads[d + k] = -h * s.normal[k];
  }
  const double c = -h * s.center;
  GenStrip out(PolyhedralFunc(d, std::move(grads), {c, -c}));
  return out;
}

bool member(const GenStrip& s, const Point& x, const Tolerances& tol) {
  return !prox(s.f, x, tol).differentiable;
}

namespace {

double dot_span(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Indices of pieces with pairwise distinct gradients, each group represented
// by its largest offset (lowest index on ties), sorted by index.
std::vector<std::size_t> dedup_gradients(const PolyhedralFunc& f) {
  const std::size_t d = f.dim();
  const double q = 1e-12 * (1.0 + f.lip());
  std::vector<std::vector<long long>> keys(f.size(), std::vector<long long>(d));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto v = f.gradient(i);
    for (std::size_t k = 0; k < d; ++k) keys[i][k] = std::llround(v[k] / q);
  }
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    std::size_t best = order[s];
    while (e < order.size() && keys[order[e]] == keys[order[s]]) {
      if (f.offset(order[e]) > f.offset(best)) best = order[e];
      ++e;
    }
    keep.push_back(best);
    s = e;
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

enum class Domination { dominated, not_dominated, inconclusive };

// Is the affine function (target_v, target_c) <= max over `others` everywhere
// on {x : <w, x> + wc = 0} (or on all of R^d when w is empty)? Solves
//   max sum l_j c_j + mu wc  s.t.  sum l_j v_j + mu w = target_v, sum l_j = 1, l >= 0.
Domination dominated_by(const PolyhedralFunc& f, std::span<const std::size_t> others,
                        std::span<const double> target_v, double target_c,
                        std::span<const double> w = {}, double wc = 0.0) {
  const std::size_t d = f.dim();
  const std::size_t n = others.size();
  if (n == 0) return Domination::not_dominated;
  const std::size_t extra = w.empty() ? 0 : 2;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(d + 1), static_cast<Eigen::Index>(n + extra));
  Eigen::VectorXd b(static_cast<Eigen::Index>(d + 1));
  Eigen::VectorXd c(static_cast<Eigen::Index>(n + extra));
  for (std::size_t j = 0; j < n; ++j) {
    const auto v = f.gradient(others[j]);
    const auto col = static_cast<Eigen::Index>(j);
    for (std::size_t k = 0; k < d; ++k) A(static_cast<Eigen::Index>(k), col) = v[k];
    A(static_cast<Eigen::Index>(d), col) = 1.0;
    c(col) = f.offset(others[j]);
  }
  if (extra) {
    for (std::size_t s = 0; s < 2; ++s) {
      const double sg = s == 0 ? 1.0 : -1.0;
      const auto col = static_cast<Eigen::Index>(n + s);
      for (std::size_t k = 0; k < d; ++k) A(static_cast<Eigen::Index>(k), col) = sg * w[k];
      A(static_cast<Eigen::Index>(d), col) = 0.0;
      c(col) = sg * wc;
    }
  }
  for (std::size_t k = 0; k < d; ++k) b(static_cast<Eigen::Index>(k)) = target_v[k];
  b(static_cast<Eigen::Index>(d)) = 1.0;

  const LpResult lp = solve_standard_lp(A, b, c);
  if (lp.status == LpStatus::infeasible) return Domination::not_dominated;
  if (lp.status == LpStatus::unbounded) return Domination::dominated;
  if (lp.status != LpStatus::optimal) return Domination::inconclusive;
  const Eigen::VectorXd resid = A * lp.x - b;
  double vnorm = 0.0;
  for (double t : target_v) vnorm += t * t;
  vnorm = std::sqrt(vnorm);
  if (resid.norm() > 1e-12 * (1.0 + vnorm)) return Domination::inconclusive;
  if (lp.objective - target_c >= -1e-12 * (1.0 + std::abs(target_c))) return Domination::dominated;
  return Domination::not_dominated;
}

}  // namespace

PolyhedralFunc prune(const PolyhedralFunc& f, PruneStats* stats) {
  PruneStats st;
  st.input = f.size();
  std::vector<std::size_t> keep = dedup_gradients(f);
  st.after_dedup = keep.size();
  std::vector<char> alive(f.size(), 0);
  for (std::size_t i : keep) alive[i] = 1;

  std::vector<std::size_t> others;
  for (std::size_t k : keep) {
    others.clear();
    for (std::size_t j : keep) {
      if (j != k && alive[j]) others.push_back(j);
    }
    if (others.empty()) continue;
    ++st.lp_solves;
    const Domination dom = dominated_by(f, others, f.gradient(k), f.offset(k));
    if (dom == Domination::dominated) alive[k] = 0;
    if (dom == Domination::inconclusive) ++st.lp_inconclusive;
  }

  std::vector<double> grads;
  std::vector<double> offs;
  for (std::size_t k : keep) {
    if (!alive[k]) continue;
    const auto v = f.gradient(k);
    grads.insert(grads.end(), v.begin(), v.end());
    offs.push_back(f.offset(k));
  }
  st.output = offs.size();
  if (stats) *stats = st;
  return PolyhedralFunc(f.dim(), std::move(grads), std::move(offs));
}

bool pieces_coactive(const PolyhedralFunc& f, std::size_t i, std::size_t j) {
  const std::size_t d = f.dim();
  const auto vi = f.gradient(i);
  const auto vj = f.gradient(j);
  std::vector<double> mid(d);
  std::vector<double> w(d);
  for (std::size_t k = 0; k < d; ++k) {
    mid[k] = 0.5 * (vi[k] + vj[k]);
    w[k] = vi[k] - vj[k];
  }
  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (k != i && k != j) others.push_back(k);
  }
  const double cmid = 0.5 * (f.offset(i) + f.offset(j));
  // On {f_i = f_j} the midpoint piece coincides with both.
  return dominated_by(f, others, mid, cmid, w, f.offset(i) - f.offset(j)) != Domination::dominated;
}

GenStrip merge(const GenStrip& a, const GenStrip& b, const MergeOptions& opt) {
  require_dim(a.dim(), b.dim(), "merge");
  const PolyhedralFunc& f = a.f;
  const PolyhedralFunc& g = b.f;
  const std::size_t d = f.dim();
  std::vector<double> grads;
  std::vector<double> offs;
  grads.reserve(f.size() * g.size() * d);
  offs.reserve(f.size() * g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto vi = f.gradient(i);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto uj = g.gradient(j);
      for (std::size_t k = 0; k < d; ++k) grads.push_back(vi[k] + uj[k]);
      offs.push_back(f.offset(i) + g.offset(j) + dot_span(vi, uj));
    }
  }
  PolyhedralFunc h(d, std::move(grads), std::move(offs));
  if (opt.prune) h = prune(h);
  if (h.size() > opt.cap) {
    throw BudgetError("merge: " + std::to_string(h.size()) + " pieces after pruning exceed the cap of " +
                          std::to_string(opt.cap) + "; merge in balanced order or raise the cap",
                      static_cast<double>(h.size()));
  }
  return GenStrip(std::move(h));
}

GenStrip merge_all(std::span<const GenStrip> strips, std::size_t cap) {
  if (strips.empty()) throw PreconditionError("merge_all: empty strip list");
  std::vector<GenStrip> level(strips.begin(), strips.end());
  for (const GenStrip& s : level) require_dim(level.front().dim(), s.dim(), "merge_all");
  MergeOptions opt;
  opt.cap = cap;
  while (level.size() > 1) {
    std::vector<GenStrip> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(merge(level[i], level[i + 1], opt));
    if (level.size() % 2) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

double ImageHyperplanes::distance_to_union(const Point& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Hyperplane& h : planes) best = std::min(best, std::abs(h.signed_distance(x)));
  return best;
}

ImageHyperplanes image_hyperplanes(const GenStrip& s, const ImageHyperplaneOptions& opt) {
  const PolyhedralFunc& f = s.f;
  const std::size_t d = f.dim();
  ImageHyperplanes out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = i + 1; j < f.size(); ++j) {
      Point w(d);
      const auto vi = f.gradient(i);
      const auto vj = f.gradient(j);
      for (std::size_t k = 0; k < d; ++k) w[k] = vi[k] - vj[k];
      if (w.norm() <= opt.grad_tol) continue;
      if (opt.coactive_only && !pieces_coactive(f, i, j)) continue;
      const double dc = f.offset(j) - f.offset(i);
      out.planes.push_back(Hyperplane::from_unnormalized(w, dc));
      out.sources.push_back({i, j, std::nullopt});
      if (!opt.include_shifted) continue;
      for (std::size_t k = 0; k < f.size(); ++k) {
        const double shift = dot_span(w.coords(), f.gradient(k));
        out.planes.push_back(Hyperplane::from_unnormalized(w, dc + shift));
        out.sources.push_back({i, j, k});
      }
    }
  }
  return out;
}

double active_pair_residual(const PolyhedralFunc& f, const Point& y, const Tolerances& tol) {
  const auto act = active_pieces(f, y, tol);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < act.size(); ++a) {
    for (std::size_t b = a + 1; b < act.size(); ++b) {
      const auto vi = f.gradient(act[a]);
      const auto vj = f.gradient(act[b]);
      double n2 = 0.0;
      for (std::size_t k = 0; k < f.dim(); ++k) n2 += (vi[k] - vj[k]) * (vi[k] - vj[k]);
      const double n = std::sqrt(n2);
      if (n <= tol.grad_tol) continue;
      best = std::min(best, std::abs(f.piece_value(act[a], y) - f.piece_value(act[b], y)) / n);
    }
  }
  return best;
}

double support_pair_residual(const PolyhedralFunc& f, const ProxResult& pr, const Tolerances& tol) {
  std::vector<std::size_t> sup;
  for (std::size_t a = 0; a < pr.active.size(); ++a) {
    if (pr.dual_weights[a] > 0.0) sup.push_back(pr.active[a]);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < sup.size(); ++a) {
    for (std::size_t b = a + 1; b < sup.size(); ++b) {
      const auto vi = f.gradient(sup[a]);
      const auto vj = f.gradient(sup[b]);
      double n2 = 0.0;
      for (std::size_t k = 0; k < f.dim(); ++k) n2 += (vi[k] - vj[k]) * (vi[k] - vj[k]);
      const double n = std::sqrt(n2);
      if (n <= tol.grad_tol) continue;
      best = std::min(best, std::abs(f.piece_value(sup[a], pr.y) - f.piece_value(sup[b], pr.y)) / n);
    }
  }
  return best;
}

double gamma_upper_bound(std::span<const GenStrip> cover) noexcept {
  double s = 0.0;
  for (const GenStrip& g : cover) s += g.width_bound;
  return s;
}

}  // namespace kolmo
