#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kolmo/errors.hpp"
#include "kolmo/geom.hpp"

namespace kolmo {

/// Classification slacks. act_tol is relative: piece i is active at y when
/// f(y) - f_i(y) <= act_tol * (1 + |f(y)|).
struct Tolerances {
  double act_tol = 1e-10;
  double grad_tol = 1e-9;
  double cert_tol = 1e-7;

  void validate() const;
};

/// Convex function x -> max_i (<v_i, x> + c_i). Gradients are stored row-wise
/// in one flat buffer.
class PolyhedralFunc {
 public:
  PolyhedralFunc(std::size_t dim, const std::vector<AffineFunc>& pieces);
  PolyhedralFunc(std::size_t dim, std::vector<double> gradients, std::vector<double> offsets);

  static PolyhedralFunc zero(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return offsets_.size(); }

  std::span<const double> gradient(std::size_t i) const noexcept {
    return {grads_.data() + i * dim_, dim_};
  }
  Point gradient_point(std::size_t i) const { return Point(gradient(i)); }
  double offset(std::size_t i) const noexcept { return offsets_[i]; }
  const std::vector<double>& gradients() const noexcept { return grads_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  AffineFunc piece(std::size_t i) const { return {gradient_point(i), offsets_[i]}; }
  std::vector<AffineFunc> pieces() const;

  double piece_value(std::size_t i, const Point& x) const noexcept;
  /// max_i |v_i|, cached at construction.
  double lip() const noexcept { return lip_; }

  PolyhedralFunc plus_constant(double c) const;

 private:
  void validate();

  std::size_t dim_;
  std::vector<double> grads_;
  std::vector<double> offsets_;
  double lip_ = 0.0;
};

struct EvalResult {
  double value;
  std::size_t argmax;  // lowest index attaining the max
};

EvalResult eval(const PolyhedralFunc& f, const Point& x);
inline double lip(const PolyhedralFunc& f) noexcept { return f.lip(); }

struct ProxResult {
  Point y;
  std::vector<std::size_t> active;   // sorted
  bool differentiable = true;
  std::vector<double> dual_weights;  // aligned with active
  double certificate_residual = 0.0;
  std::size_t iterations = 0;
};

/// Thrown when the dual solver hits its iteration cap on a large instance.
class SolverError : public InvariantError {
 public:
  SolverError(const std::string& what, Point best, double residual, std::size_t iterations)
      : InvariantError(what), best_(best), residual_(residual), iterations_(iterations) {}
  const Point& best_iterate() const noexcept { return best_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  Point best_;
  double residual_;
  std::size_t iterations_;
};

/// argmin_y f(y) + |x - y|^2 / 2, computed through the dual problem over the
/// probability simplex. `warm` may list the active pieces of a nearby call.
ProxResult prox(const PolyhedralFunc& f, const Point& x, const Tolerances& tol = {},
                std::span<const std::size_t> warm = {});

/// Brute-force multilevel grid search of the prox objective over the cube of
/// half-width grid_radius around x. Independent of the dual solver.
Point prox_oracle(const PolyhedralFunc& f, const Point& x, double grid_radius,
                  std::size_t levels = 6);

std::vector<std::size_t> active_pieces(const PolyhedralFunc& f, const Point& y,
                                       const Tolerances& tol = {});

/// Largest pairwise distance between the gradients of the listed pieces.
double gradient_diameter(const PolyhedralFunc& f, std::span<const std::size_t> idx);

bool differentiable_at(const PolyhedralFunc& f, const Point& y, const Tolerances& tol = {});

struct CertificateResult {
  bool ok;
  double residual;
};

/// Distance from x - y to the convex hull of the gradients active at y.
CertificateResult subgradient_certificate(const PolyhedralFunc& f, const Point& x, const Point& y,
                                          const Tolerances& tol = {});

}  // namespace kolmo
