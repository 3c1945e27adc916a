#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "kolmo/errors.hpp"

namespace kolmo {

inline constexpr std::size_t kMaxDim = 8;

/// A point (or vector) of R^d with runtime dimension 1 <= d <= kMaxDim.
/// Storage is inline, so points are cheap to copy.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);
  explicit Point(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  const double* data() const noexcept { return c_.data(); }
  double* data() noexcept { return c_.data(); }
  std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

  double squared_norm() const noexcept;
  double norm() const noexcept;
  bool is_finite() const noexcept;

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s) noexcept;
  Point& operator/=(double s) noexcept;

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator-(Point a) noexcept { return a *= -1.0; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend Point operator/(Point a, double s) noexcept { return a /= s; }
  friend bool operator==(const Point& a, const Point& b) noexcept;

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 0;
};

void require_same_dim(const Point& a, const Point& b, const char* where);
void require_dim(std::size_t expected, std::size_t got, const char* where);

double dot(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

/// x -> <gradient, x> + offset
struct AffineFunc {
  Point gradient;
  double offset = 0.0;

  std::size_t dim() const noexcept { return gradient.dim(); }
};

double eval_affine(const AffineFunc& a, const Point& x);

/// {x : <normal, x> = offset} with a unit normal.
struct Hyperplane {
  Point normal;
  double offset = 0.0;

  /// Normalizes an arbitrary nonzero normal; the offset is rescaled with it.
  static Hyperplane from_unnormalized(const Point& normal, double offset);
  double signed_distance(const Point& x) const;
};

/// Closed slab {x : |<normal, x> - center| <= width / 2}.
struct ClassicalStrip {
  Point normal;
  double center = 0.0;
  double width = 0.0;

  /// Validates the unit normal and positive width.
  static ClassicalStrip make(const Point& normal, double center, double width);
};

bool strip_membership(const ClassicalStrip& s, const Point& x);

struct BoundingBox {
  Point low;
  Point high;

  static BoundingBox make(const Point& low, const Point& high);
  static BoundingBox unit(std::size_t dim);
  std::size_t dim() const noexcept { return low.dim(); }
  bool contains(const Point& x) const;
  Point center() const;
  Point extent() const;
  double max_extent() const;
  double volume() const;
  double half_diagonal() const;
  BoundingBox expanded(double margin) const;
  std::vector<Point> corners() const;
};

/// Counter-based uniform generator: draw k of a stream is splitmix64(seed + k *
/// 0x9E3779B97F4A7C15). Integer and uniform draws are bit-identical
/// on every platform; normal() additionally depends on libm's log/cos.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed = 0, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) noexcept;
  double normal() noexcept;
  /// Independent child stream; the parent is not advanced.
  SampleStream split(std::uint64_t stream_id) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::vector<Point> sample_box(const BoundingBox& bb, std::size_t n, SampleStream& stream);
Point sample_in_box(const BoundingBox& bb, SampleStream& stream);
/// Uniform direction on the unit sphere of R^dim.
Point sample_direction(std::size_t dim, SampleStream& stream);

}  // namespace kolmo
