#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace kolmo {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s) noexcept;

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  Eigen::VectorXd x;  // primal solution when optimal
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// maximize c.x subject to A x = b, x >= 0.
/// Dense two-phase revised simplex for few rows (the basis is refactored at
/// every pivot) and many columns. Dantzig pricing, Bland's rule after a run of
/// degenerate pivots.
LpResult solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& c);

}  // namespace kolmo
