#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kolmo/geom.hpp"
#include "kolmo/polyfun.hpp"

namespace kolmo {

/// S(f) = {x : f is not differentiable at prox_f(x)}. width_bound is the
/// representation bound 2 lip(f) on the width of S.
struct GenStrip {
  PolyhedralFunc f;
  double width_bound;

  explicit GenStrip(PolyhedralFunc fn) : f(std::move(fn)), width_bound(2.0 * f.lip()) {}
  std::size_t dim() const noexcept { return f.dim(); }
};

/// The slab {|<n,x> - b| <= w/2} as S(|<v,x> + c|) with v = (w/2) n, c = -(w/2) b.
GenStrip from_classical(const ClassicalStrip& s);

bool member(const GenStrip& s, const Point& x, const Tolerances& tol = {});

struct MergeOptions {
  std::size_t cap = 4096;
  bool prune = true;
};

/// Pieces f_i + g_j + <v_i, u_j>; S(a) and S(b) are both contained in the result.
GenStrip merge(const GenStrip& a, const GenStrip& b, const MergeOptions& opt = {});

/// Balanced pairwise merge, pruning after every step.
GenStrip merge_all(std::span<const GenStrip> strips, std::size_t cap = 4096);

struct PruneStats {
  std::size_t input = 0;
  std::size_t after_dedup = 0;
  std::size_t output = 0;
  std::size_t lp_solves = 0;
  std::size_t lp_inconclusive = 0;
};

/// Drops pieces that an LP certificate shows to be globally dominated by the
/// remaining ones. Gradients equal up to 1e-12 relative are merged first,
/// keeping the largest offset.
PolyhedralFunc prune(const PolyhedralFunc& f, PruneStats* stats = nullptr);

/// True unless an LP certifies that pieces i and j are never simultaneously
/// maximal on a set of positive measure within {f_i = f_j}.
bool pieces_coactive(const PolyhedralFunc& f, std::size_t i, std::size_t j);

struct HyperplaneSource {
  std::size_t i;
  std::size_t j;
  std::optional<std::size_t> k;  // set for shifted candidates
};

struct ImageHyperplanes {
  std::vector<Hyperplane> planes;
  std::vector<HyperplaneSource> sources;

  std::size_t size() const noexcept { return planes.size(); }
  /// Infinity when there are no planes.
  double distance_to_union(const Point& x) const;
};

struct ImageHyperplaneOptions {
  bool coactive_only = false;
  bool include_shifted = false;
  double grad_tol = 1e-9;
};

/// Planes {f_i = f_j} over pairs with distinct gradients, optionally with
/// the shifted candidates {(f_i - f_j)(x - v_k) = 0}.
ImageHyperplanes image_hyperplanes(const GenStrip& s, const ImageHyperplaneOptions& opt = {});

/// Distance from y to the nearest plane {f_i = f_j} over pairs of pieces
/// active at y with distinct gradients; infinity when there is no such pair.
double active_pair_residual(const PolyhedralFunc& f, const Point& y, const Tolerances& tol = {});

/// Same over pairs carrying positive dual weight in pr. Infinity when the
/// support has no two distinct gradients, i.e. x is in S(f) only through the
/// activity tolerance.
double support_pair_residual(const PolyhedralFunc& f, const ProxResult& pr, const Tolerances& tol = {});

double gamma_upper_bound(std::span<const GenStrip> cover) noexcept;

}  // namespace kolmo
