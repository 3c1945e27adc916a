#include "kolmo/geom.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace kolmo {

namespace {

std::size_t checked_dim(std::size_t dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw PreconditionError("point dimension " + std::to_string(dim) + " outside 1.." +
                            std::to_string(kMaxDim));
  }
  return dim;
}

}  // namespace

Point::Point(std::size_t dim) : dim_(checked_dim(dim)) {}

Point::Point(std::initializer_list<double> coords) : dim_(checked_dim(coords.size())) {
  std::size_t i = 0;
  for (double v : coords) c_[i++] = v;
}

Point::Point(std::span<const double> coords) : dim_(checked_dim(coords.size())) {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] = coords[i];
}

double Point::squared_norm() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

double Point::norm() const noexcept { return std::sqrt(squared_norm()); }

bool Point::is_finite() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

Point& Point::operator+=(const Point& o) {
  require_same_dim(*this, o, "Point::operator+=");
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  require_same_dim(*this, o, "Point::operator-=");
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

Point& Point::operator/=(double s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] /= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

void require_same_dim(const Point& a, const Point& b, const char* where) {
  if (a.dim() != b.dim()) throw DimensionError(a.dim(), b.dim(), where);
}

void require_dim(std::size_t expected, std::size_t got, const char* where) {
  if (expected != got) throw DimensionError(expected, got, where);
}

double dot(const Point& a, const Point& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double distance(const Point& a, const Point& b) { return (a - b).norm(); }

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ')';
  return os.str();
}

double eval_affine(const AffineFunc& a, const Point& x) {
  require_same_dim(a.gradient, x, "eval_affine");
  return dot(a.gradient, x) + a.offset;
}

Hyperplane Hyperplane::from_unnormalized(const Point& normal, double offset) {
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw PreconditionError("hyperplane normal must be nonzero and finite");
  }
  return Hyperplane{normal / n, offset / n};
}

double Hyperplane::signed_distance(const Point& x) const { return dot(normal, x) - offset; }

ClassicalStrip ClassicalStrip::make(const Point& normal, double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw PreconditionError("classical strip width must be positive and finite");
  }
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw PreconditionError("classical strip normal must have unit length");
  }
  return ClassicalStrip{normal, center, width};
}

bool strip_membership(const ClassicalStrip& s, const Point& x) {
  require_same_dim(s.normal, x, "strip_membership");
  return std::abs(dot(s.normal, x) - s.center) <= s.width / 2.0;
}

BoundingBox BoundingBox::make(const Point& low, const Point& high) {
  require_same_dim(low, high, "BoundingBox::make");
  for (std::size_t i = 0; i < low.dim(); ++i) {
    if (!(low[i] <= high[i])) throw PreconditionError("bounding box has low > high");
  }
  return BoundingBox{low, high};
}

BoundingBox BoundingBox::unit(std::size_t dim) {
  Point lo(dim);
  Point hi(dim);
  for (std::size_t i = 0; i < dim; ++i) hi[i] = 1.0;
  return BoundingBox{lo, hi};
}

bool BoundingBox::contains(const Point& x) const {
  require_same_dim(low, x, "BoundingBox::contains");
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (x[i] < low[i] || x[i] > high[i]) return false;
  }
  return true;
}

Point BoundingBox::center() const { return (low + high) * 0.5; }
Point BoundingBox::extent() const { return high - low; }

double BoundingBox::max_extent() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) m = std::max(m, high[i] - low[i]);
  return m;
}

double BoundingBox::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= high[i] - low[i];
  return v;
}

double BoundingBox::half_diagonal() const { return extent().norm() / 2.0; }

BoundingBox BoundingBox::expanded(double margin) const {
  BoundingBox b = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    b.low[i] -= margin;
    b.high[i] += margin;
  }
  return b;
}

std::vector<Point> BoundingBox::corners() const {
  const std::size_t d = dim();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << d);
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = (mask >> i) & 1U ? high[i] : low[i];
    out.push_back(p);
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t SampleStream::next_u64() noexcept {
  const std::uint64_t v = splitmix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
  ++counter_;
  return v;
}

double SampleStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t SampleStream::index(std::size_t n) noexcept {
  if (n == 0) return 0;
  __extension__ using u128 = unsigned __int128;
  const u128 prod = static_cast<u128>(next_u64()) * n;
  return static_cast<std::size_t>(prod >> 64);
}

double SampleStream::normal() noexcept {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

SampleStream SampleStream::split(std::uint64_t stream_id) const noexcept {
  return SampleStream(splitmix64(seed_ ^ splitmix64(stream_id + 0x632BE59BD9B4E019ULL)), 0);
}

Point sample_in_box(const BoundingBox& bb, SampleStream& stream) {
  Point p(bb.dim());
  for (std::size_t i = 0; i < bb.dim(); ++i) p[i] = stream.uniform(bb.low[i], bb.high[i]);
  return p;
}

std::vector<Point> sample_box(const BoundingBox& bb, std::size_t n, SampleStream& stream) {
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(sample_in_box(bb, stream));
  return out;
}

Point sample_direction(std::size_t dim, SampleStream& stream) {
  for (;;) {
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = stream.normal();
    const double n = p.norm();
    if (n > 1e-12) return p / n;
  }
}

}  // namespace kolmo
