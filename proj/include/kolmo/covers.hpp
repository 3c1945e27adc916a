#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kolmo/geom.hpp"
#include "kolmo/gstrip.hpp"
#include "kolmo/hull.hpp"
#include "kolmo/polyfun.hpp"

namespace kolmo {

/// Bounded convex body. `cloud(tol)` returns points of C whose hull has
/// support function within tol of C's in every direction.
struct ConvexBody {
  std::size_t dim = 0;
  BoundingBox bbox;
  std::string description;
  std::function<std::vector<Point>(double tol)> cloud;
  /// h_C(u) = sup_{c in C} <u, c> for unit u.
  std::function<double(const Point& u)> support;
  std::function<double(const Point& x)> signed_distance;

  static ConvexBody ball(const Point& center, double radius);
  static ConvexBody box(const BoundingBox& bb);
  /// conv(points); exact support and signed distance.
  static ConvexBody from_points(std::vector<Point> points);
  /// Convex set given by a membership oracle and an interior point. The
  /// boundary is located by bisection along rays, so support and distance
  /// are approximations.
  static ConvexBody from_oracle(std::function<bool(const Point&)> inside, const BoundingBox& bb,
                                const Point& interior, std::size_t rays = 720);
};

/// f: U -> R with declared Lipschitz constant L and optional gradient
/// Lipschitz constant M.
struct ScalarField {
  std::size_t dim = 1;
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;  // may be empty
  double L = 0.0;
  std::optional<double> M;
  std::string description;

  /// Gradient evaluator, else central differences with step h.
  Point subgradient(const Point& x, double h) const;
};

struct CoverResult {
  std::vector<GenStrip> strips;
  double total_width_bound = 0.0;
  double slack = 0.0;
  std::string target;
  std::size_t samples_checked = 0;
  std::size_t violations = 0;
  std::size_t convexity_violations = 0;
};

struct ConvexCoverOptions {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  Tolerances tol{};
};

/// One strip S(max(0, max_i f_i)) whose f_i are the facet functions of
/// conv(net) scaled to gradient norm r + eps; covers C_r minus Int C.
CoverResult convex_neighborhood_cover(const ConvexBody& C, double r, double eps,
                                      const ConvexCoverOptions& opt = {});

/// Same construction from an explicit finite net D of C (no refinement).
GenStrip convex_neighborhood_strip(std::span<const Point> net, double r, double eps);

struct ApproxOptions {
  std::optional<std::vector<Point>> net;  // default: cell centres of a grid over U
  std::size_t convexity_checks = 1000;
  std::uint64_t seed = 0;
};

/// max_i (<v_i, x - x_i> + f(x_i)) over a net of spacing eps / (L sqrt(d)).
PolyhedralFunc convex_polyhedral_approx(const ScalarField& f, const BoundingBox& U, double eps,
                                        const ApproxOptions& opt = {});

/// S(F) with F(x, y) = 2 eps max(2 g(x) - y, y + 2 h(x)); requires lip(g),
/// lip(h) <= 1/3.
GenStrip dc_graph_cover(const PolyhedralFunc& g, const PolyhedralFunc& h, double eps);

struct SurfaceCoverOptions {
  std::size_t samples = 10000;
  std::size_t gradient_checks = 2000;
  std::uint64_t seed = 0;
  Tolerances tol{};
};

/// One strip containing graph(f) over W with width bound <= 16 eps.
/// Requires f.M, |grad f| <= 1/6 on W and W inside B(0, 1/(6M)).
CoverResult surface_cover(const ScalarField& f, const BoundingBox& W, double eps,
                          const SurfaceCoverOptions& opt = {});

struct RadialInterval {
  double lo;
  double hi;
};

struct RadialCoverOptions {
  std::size_t dim = 2;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  Tolerances tol{};
};

/// One annulus strip per interval; total bound <= 2 sum |I_i| + 2 n eps.
CoverResult radial_cover(std::span<const RadialInterval> intervals, double eps,
                         const RadialCoverOptions& opt = {});

/// Sampled pairs (a, b) in U with f((a+b)/2) > (f(a)+f(b))/2 + 1e-9 (1 + |f|).
std::size_t midpoint_convexity_violations(const ScalarField& f, const BoundingBox& U, std::size_t n,
                                          SampleStream& stream);

}  // namespace kolmo
