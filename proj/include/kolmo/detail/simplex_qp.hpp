#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmo/geom.hpp"

namespace kolmo::detail {

/// Problem: minimize 0.5 |g - V l|^2 - c.l over the probability simplex,
/// where column i of V is the row i of `grads` (m x d, row-major).
/// Optimality: every support index has equal value <v_i, y> + c_i at
/// y = g - V l, and that value is maximal over all i.
struct SimplexQp {
  std::span<const double> grads;
  std::span<const double> offsets;  // empty means all zero
  std::size_t dim = 0;
  std::size_t count = 0;
};

struct SimplexQpResult {
  std::vector<std::size_t> support;
  std::vector<double> weights;  // aligned with support, sum 1
  Point y;
  std::size_t iterations = 0;
  double kkt_gap = 0.0;  // max_i value_i(y) - min_{i in support} value_i(y)
  bool converged = false;
};

/// Active-set solver. Returns converged = false when the iteration cap
/// 10 * count^2 is reached; the result then holds the best iterate.
SimplexQpResult solve_active_set(const SimplexQp& qp, const Point& g,
                                 std::span<const std::size_t> warm = {});

/// Exhaustive enumeration of affinely independent supports. Exact for small
/// counts; cost grows like count^(dim+1).
SimplexQpResult solve_exhaustive(const SimplexQp& qp, const Point& g);

}  // namespace kolmo::detail
