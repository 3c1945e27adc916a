#include "kolmo/detail/simplex_qp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace kolmo::detail {

namespace {

constexpr std::size_t kMaxCols = kMaxDim + 2;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxCols>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxCols, 1>;
using DimVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

constexpr double kDropWeight = 1e-14;
constexpr double kDependRel = 1e-10;

struct Solver {
  const SimplexQp& qp;
  const Point& g;
  double grad_scale = 0.0;

  double offset(std::size_t i) const { return qp.offsets.empty() ? 0.0 : qp.offsets[i]; }

  double value(std::size_t i, const Point& y) const {
    const double* v = qp.grads.data() + i * qp.dim;
    double s = offset(i);
    for (std::size_t k = 0; k < qp.dim; ++k) s += v[k] * y[k];
    return s;
  }

  Point point_of(const std::vector<std::size_t>& s, const std::vector<double>& lam) const {
    Point y = g;
    for (std::size_t a = 0; a < s.size(); ++a) {
      const double* v = qp.grads.data() + s[a] * qp.dim;
      for (std::size_t k = 0; k < qp.dim; ++k) y[k] -= lam[a] * v[k];
    }
    return y;
  }

  double objective(const std::vector<std::size_t>& s, const std::vector<double>& lam) const {
    const Point y = point_of(s, lam);
    double obj = 0.5 * y.squared_norm();
    for (std::size_t a = 0; a < s.size(); ++a) obj -= lam[a] * offset(s[a]);
    return obj;
  }

  struct Affine {
    bool dependent = false;
    std::size_t dep_pos = 0;  // position in the support of the dependent member
    Vec beta;                 // d_{dep} = sum_k beta_k d_k over earlier columns
    std::vector<double> lambda;
  };

  // Minimizer of the objective on the affine hull of the support: the
  // weights summing to one at which all support values coincide.
  Affine affine_solve(const std::vector<std::size_t>& s) const {
    Affine out;
    const std::size_t n = s.size() - 1;
    if (n == 0) {
      out.lambda = {1.0};
      return out;
    }
    const std::size_t d = qp.dim;
    const double* v0 = qp.grads.data() + s[0] * d;
    Mat D(d, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double* vk = qp.grads.data() + s[k + 1] * d;
      for (std::size_t r = 0; r < d; ++r) D(r, k) = vk[r] - v0[r];
    }
    Eigen::HouseholderQR<Mat> qr(D);
    const Mat& R = qr.matrixQR();
    const std::size_t diag = std::min(d, n);
    std::size_t dep = n;
    for (std::size_t p = 0; p < diag; ++p) {
      const double rpp = std::abs(R(p, p));
      if (rpp <= kDependRel * D.col(p).norm() || rpp <= 1e-14 * (1.0 + grad_scale)) {
        dep = p;
        break;
      }
    }
    if (dep == n && n > d) dep = d;
    if (dep < n) {
      out.dependent = true;
      out.dep_pos = dep + 1;
      out.beta = Vec::Zero(dep);
      if (dep > 0) {
        out.beta = R.topLeftCorner(dep, dep)
                       .triangularView<Eigen::Upper>()
                       .solve(R.col(dep).head(dep));
      }
      return out;
    }
    DimVec r(d);
    for (std::size_t k = 0; k < d; ++k) r(k) = g[k] - v0[k];
    DimVec qtr = qr.householderQ().adjoint() * r;
    Vec dc(n);
    for (std::size_t k = 0; k < n; ++k) dc(k) = offset(s[k + 1]) - offset(s[0]);
    const auto Rn = R.topLeftCorner(n, n).triangularView<Eigen::Upper>();
    Vec w = Rn.transpose().solve(dc);
    Vec alpha = Rn.solve(Vec(qtr.head(n) + w));
    out.lambda.resize(n + 1);
    out.lambda[0] = 1.0 - alpha.sum();
    for (std::size_t k = 0; k < n; ++k) out.lambda[k + 1] = alpha(k);
    return out;
  }

  static void remove_at(std::vector<std::size_t>& s, std::vector<double>& lam, std::size_t pos) {
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos));
    lam.erase(lam.begin() + static_cast<std::ptrdiff_t>(pos));
  }

  static void drop_small(std::vector<std::size_t>& s, std::vector<double>& lam) {
    for (std::size_t a = s.size(); a-- > 0;) {
      if (lam[a] <= kDropWeight && s.size() > 1) remove_at(s, lam, a);
    }
    const double sum = std::accumulate(lam.begin(), lam.end(), 0.0);
    for (double& l : lam) l /= sum;
  }

  double kkt_gap(const std::vector<std::size_t>& s, const Point& y) const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i : s) lo = std::min(lo, value(i, y));
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < qp.count; ++i) hi = std::max(hi, value(i, y));
    return hi - lo;
  }

  bool try_warm(std::span<const std::size_t> warm, std::vector<std::size_t>& s,
                std::vector<double>& lam) const {
    s.clear();
    for (std::size_t i : warm) {
      if (i < qp.count && std::find(s.begin(), s.end(), i) == s.end()) s.push_back(i);
    }
    if (s.empty() || s.size() > qp.dim + 1) return false;
    for (;;) {
      Affine a = affine_solve(s);
      if (a.dependent) {
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(a.dep_pos));
        continue;
      }
      for (double l : a.lambda) {
        if (l < 0.0) return false;
      }
      lam = a.lambda;
      drop_small(s, lam);
      return true;
    }
  }
};

}  // namespace

SimplexQpResult solve_active_set(const SimplexQp& qp, const Point& g,
                                 std::span<const std::size_t> warm) {
  require_dim(qp.dim, g.dim(), "solve_active_set");
  Solver sv{qp, g};
  for (std::size_t i = 0; i < qp.count; ++i) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < qp.dim; ++k) n2 += qp.grads[i * qp.dim + k] * qp.grads[i * qp.dim + k];
    sv.grad_scale = std::max(sv.grad_scale, std::sqrt(n2));
  }

  std::vector<std::size_t> s;
  std::vector<double> lam;
  if (warm.empty() || !sv.try_warm(warm, s, lam)) {
    std::size_t k0 = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < qp.count; ++i) {
      const double* v = qp.grads.data() + i * qp.dim;
      double n2 = 0.0;
      for (std::size_t k = 0; k < qp.dim; ++k) n2 += v[k] * v[k];
      const double score = 0.5 * n2 - sv.value(i, g);
      if (score < best) {
        best = score;
        k0 = i;
      }
    }
    s = {k0};
    lam = {1.0};
  }

  SimplexQpResult res;
  const std::size_t cap = 10 * qp.count * qp.count;
  std::vector<char> in_support(qp.count, 0);
  std::size_t iter = 0;
  Point y = sv.point_of(s, lam);

  while (true) {
    std::fill(in_support.begin(), in_support.end(), 0);
    for (std::size_t i : s) in_support[i] = 1;
    double fs = -std::numeric_limits<double>::infinity();
    for (std::size_t i : s) fs = std::max(fs, sv.value(i, y));
    std::size_t j = qp.count;
    double fj = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < qp.count; ++i) {
      if (in_support[i]) continue;
      const double vi = sv.value(i, y);
      if (vi > fj) {
        fj = vi;
        j = i;
      }
    }
    if (j == qp.count || fj - fs <= 1e-12 * (1.0 + std::abs(fs))) {
      res.converged = true;
      break;
    }
    if (++iter > cap) break;

    s.push_back(j);
    lam.push_back(0.0);
    bool first = true;
    bool stalled = false;
    while (true) {
      if (++iter > cap) break;
      Solver::Affine a = sv.affine_solve(s);
      if (a.dependent) {
        // Affinely dependent support: move along the null direction of the
        // weights (y is unchanged) until some weight reaches zero.
        std::vector<double> delta(s.size(), 0.0);
        const std::size_t q = a.dep_pos;
        delta[q] = 1.0;
        double bsum = 0.0;
        for (std::size_t k = 1; k < q; ++k) {
          delta[k] = -a.beta(static_cast<Eigen::Index>(k - 1));
          bsum += a.beta(static_cast<Eigen::Index>(k - 1));
        }
        delta[0] = bsum - 1.0;
        double slope = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) slope -= delta[k] * sv.value(s[k], y);
        if (slope > 0.0) {
          for (double& dk : delta) dk = -dk;
        }
        double t = std::numeric_limits<double>::infinity();
        std::size_t kb = 0;
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (delta[k] < 0.0 && lam[k] / -delta[k] < t) {
            t = lam[k] / -delta[k];
            kb = k;
          }
        }
        for (std::size_t k = 0; k < s.size(); ++k) lam[k] = std::max(0.0, lam[k] + t * delta[k]);
        lam[kb] = 0.0;
        Solver::remove_at(s, lam, kb);
        Solver::drop_small(s, lam);
        first = false;
        continue;
      }
      bool interior = true;
      for (double l : a.lambda) {
        if (l < 0.0) interior = false;
      }
      if (interior) {
        lam = a.lambda;
        Solver::drop_small(s, lam);
        break;
      }
      double theta = std::numeric_limits<double>::infinity();
      std::size_t kb = 0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (a.lambda[k] < 0.0) {
          const double den = lam[k] - a.lambda[k];
          const double ratio = den > 0.0 ? lam[k] / den : 0.0;
          if (ratio < theta) {
            theta = ratio;
            kb = k;
          }
        }
      }
      if (first && theta <= 0.0 && s[kb] == j) {
        stalled = true;
        Solver::remove_at(s, lam, kb);
        break;
      }
      for (std::size_t k = 0; k < s.size(); ++k) {
        lam[k] = std::max(0.0, lam[k] + theta * (a.lambda[k] - lam[k]));
      }
      lam[kb] = 0.0;
      Solver::remove_at(s, lam, kb);
      Solver::drop_small(s, lam);
      first = false;
    }
    y = sv.point_of(s, lam);
    if (stalled) {
      res.converged = true;
      break;
    }
    if (iter > cap) break;
  }

  res.iterations = iter;
  res.y = sv.point_of(s, lam);
  res.kkt_gap = sv.kkt_gap(s, res.y);
  res.support = std::move(s);
  res.weights = std::move(lam);
  return res;
}

SimplexQpResult solve_exhaustive(const SimplexQp& qp, const Point& g) {
  require_dim(qp.dim, g.dim(), "solve_exhaustive");
  Solver sv{qp, g};
  for (std::size_t i = 0; i < qp.count; ++i) {
    double n2 = 0.0;
    for (std::size_t k = 0; k < qp.dim; ++k) n2 += qp.grads[i * qp.dim + k] * qp.grads[i * qp.dim + k];
    sv.grad_scale = std::max(sv.grad_scale, std::sqrt(n2));
  }

  SimplexQpResult best;
  double best_gap = std::numeric_limits<double>::infinity();
  std::size_t visited = 0;
  const std::size_t max_size = std::min(qp.count, qp.dim + 1);
  std::vector<std::size_t> subset;

  auto consider = [&]() {
    ++visited;
    Solver::Affine a = sv.affine_solve(subset);
    if (a.dependent) return;
    for (double l : a.lambda) {
      if (l < -1e-12) return;
    }
    std::vector<double> lam = a.lambda;
    for (double& l : lam) l = std::max(l, 0.0);
    const double sum = std::accumulate(lam.begin(), lam.end(), 0.0);
    for (double& l : lam) l /= sum;
    const Point y = sv.point_of(subset, lam);
    const double gap = sv.kkt_gap(subset, y);
    if (gap < best_gap) {
      best_gap = gap;
      best.support = subset;
      best.weights = lam;
      best.y = y;
    }
  };

  auto recurse = [&](auto&& self, std::size_t start) -> void {
    if (!subset.empty()) consider();
    if (subset.size() == max_size) return;
    for (std::size_t i = start; i < qp.count; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);

  best.iterations = visited;
  best.kkt_gap = best_gap;
  double fmax = 0.0;
  if (!best.support.empty()) fmax = std::abs(sv.value(best.support[0], best.y));
  best.converged = best_gap <= 1e-9 * (1.0 + fmax);
  return best;
}

}  // namespace kolmo::detail
