#include "kolmo/lp.hpp"

#include <cmath>
#include <limits>

#include "kolmo/errors.hpp"

namespace kolmo {

const char* to_string(LpStatus s) noexcept {
  switch (s) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
    case LpStatus::iteration_limit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr std::size_t kDegenerateSwitch = 30;

// Columns 0..n-1 are structural, n..n+m-1 artificial.
struct Tableau {
  Eigen::MatrixXd A;  // rows flipped so that b >= 0
  Eigen::VectorXd b;
  std::size_t m;
  std::size_t n;
  std::vector<std::size_t> basis;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::VectorXd xb;

  Eigen::VectorXd column(std::size_t j) const {
    if (j >= n) return Eigen::VectorXd::Unit(static_cast<Eigen::Index>(m),
                                             static_cast<Eigen::Index>(j - n));
    return A.col(static_cast<Eigen::Index>(j));
  }

  void refactor() {
    Eigen::MatrixXd B(m, m);
    for (std::size_t r = 0; r < m; ++r) B.col(static_cast<Eigen::Index>(r)) = column(basis[r]);
    lu.compute(B);
    xb = lu.solve(b);
  }

  // cost: per-column objective (maximized); artificials never enter.
  LpStatus optimize(const std::vector<double>& cost, std::size_t& iters, std::size_t cap) {
    std::size_t degenerate = 0;
    double cscale = 1.0;
    for (double cj : cost) cscale = std::max(cscale, std::abs(cj));
    const double rc_tol = 1e-12 * cscale;
    for (;;) {
      if (iters >= cap) return LpStatus::iteration_limit;
      Eigen::VectorXd cb(m);
      for (std::size_t r = 0; r < m; ++r) cb(static_cast<Eigen::Index>(r)) = cost[basis[r]];
      const Eigen::VectorXd y = lu.transpose().solve(cb);
      const bool bland = degenerate >= kDegenerateSwitch;
      const Eigen::VectorXd ay = A.transpose() * y;
      std::size_t enter = n;
      double best = rc_tol;
      std::vector<char> basic(n + m, 0);
      for (std::size_t j : basis) basic[j] = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (basic[j]) continue;
        const double rc = cost[j] - ay(static_cast<Eigen::Index>(j));
        if (rc > best) {
          enter = j;
          if (bland) break;
          best = rc;
        }
      }
      if (enter == n) return LpStatus::optimal;
      const Eigen::VectorXd dcol = lu.solve(column(enter));
      std::size_t leave = m;
      double ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < m; ++r) {
        const double dr = dcol(static_cast<Eigen::Index>(r));
        if (dr <= kPivotTol) continue;
        const double q = std::max(0.0, xb(static_cast<Eigen::Index>(r))) / dr;
        if (q < ratio - 1e-15 || (q <= ratio + 1e-15 && leave < m && basis[r] < basis[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave == m) return LpStatus::unbounded;
      degenerate = ratio <= 1e-15 ? degenerate + 1 : 0;
      basis[leave] = enter;
      refactor();
      ++iters;
    }
  }
};

}  // namespace

LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c) {
  const std::size_t m = static_cast<std::size_t>(A.rows());
  const std::size_t n = static_cast<std::size_t>(A.cols());
  if (static_cast<std::size_t>(b.size()) != m || static_cast<std::size_t>(c.size()) != n) {
    throw PreconditionError("solve_standard_lp: inconsistent problem dimensions");
  }
  LpResult res;
  Tableau t{A, b, m, n, {}, {}, {}};
  for (std::size_t r = 0; r < m; ++r) {
    if (b(static_cast<Eigen::Index>(r)) < 0.0) {
      t.b(static_cast<Eigen::Index>(r)) = -b(static_cast<Eigen::Index>(r));
      t.A.row(static_cast<Eigen::Index>(r)) *= -1.0;
    }
  }
  t.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) t.basis[r] = n + r;
  t.refactor();

  const std::size_t cap = 50 * (n + m) + 100;
  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = -1.0;
  LpStatus st = t.optimize(phase1, res.iterations, cap);
  if (st == LpStatus::iteration_limit) {
    res.status = st;
    return res;
  }
  double infeas = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis[r] >= n) infeas += std::abs(t.xb(static_cast<Eigen::Index>(r)));
  }
  if (infeas > 1e-9 * (1.0 + t.b.lpNorm<Eigen::Infinity>())) {
    res.status = LpStatus::infeasible;
    return res;
  }

  // Pivot zero-level artificials out where a structural column allows it.
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis[r] < n) continue;
    std::vector<char> basic(n, 0);
    for (std::size_t j : t.basis) {
      if (j < n) basic[j] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (basic[j]) continue;
      const Eigen::VectorXd dcol = t.lu.solve(t.column(j));
      if (std::abs(dcol(static_cast<Eigen::Index>(r))) > 1e-9) {
        t.basis[r] = j;
        t.refactor();
        break;
      }
    }
  }

  std::vector<double> phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c(static_cast<Eigen::Index>(j));
  st = t.optimize(phase2, res.iterations, cap);
  res.status = st;
  if (st != LpStatus::optimal) return res;
  res.x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis[r] < n) {
      res.x(static_cast<Eigen::Index>(t.basis[r])) = std::max(0.0, t.xb(static_cast<Eigen::Index>(r)));
    }
  }
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace kolmo
