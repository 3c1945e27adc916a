#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/covers.hpp"
#include "kolmo/gstrip.hpp"
#include "kolmo/setlib.hpp"

namespace kolmo {

enum class CoverStrategy { grid_lines, convex, surface, radial, external_file };

std::string to_string(CoverStrategy s);
/// Accepts the names printed by to_string; throws ParseError otherwise.
CoverStrategy parse_strategy(const std::string& name);

struct PipelineConfig {
  double eps_target = 0.1;
  CoverStrategy strategy = CoverStrategy::grid_lines;
  /// Fraction of the 2 eps budget held back so that sum of widths < 2 eps.
  double margin = 0.01;
  std::size_t boundary_samples = 10000;
  std::size_t displacement_samples = 100000;
  std::size_t lipschitz_points = 2000;
  std::size_t lipschitz_pairs = 100000;
  std::size_t area_samples = 100000;
  std::size_t strip_samples = 10000;
  /// Raster cells across the longer bbox side for the image-area estimate.
  std::size_t raster = 256;
  /// Raster for the translation check; 0 skips it.
  std::size_t translation_raster = 0;
  std::size_t merge_cap = 4096;
  std::vector<GenStrip> external;
  Tolerances tol{};
  std::uint64_t seed = 0;
};

using Map = std::function<Point(const Point&)>;

struct LipschitzCheck {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;
};

/// Pairs (x, x') with |F(x) - F(x')| > |x - x'| + 1e-9: all pairs when
/// n(n-1)/2 <= max_pairs, otherwise max_pairs random pairs.
LipschitzCheck verify_lipschitz(const Map& F, std::span<const Point> samples, SampleStream& stream,
                                std::size_t max_pairs = 100000);

/// Surface area of the unit sphere times r^(d-1): the constant in
/// lambda(A) - lambda(F(A)) <= C eps for 1-Lipschitz F with displacement <= eps
/// and A inside B(0, r), since F(B(0, r)) contains B(0, r - eps).
double measure_constant(std::size_t d, double r);

struct MeasureLoss {
  double area_before = 0.0;
  double stderr_ = 0.0;
  double area_after = 0.0;
  double cell = 0.0;
  double bias_band = 0.0;
  double loss = 0.0;
  double radius = 0.0;
  double constant = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Monte-Carlo area of A minus the raster area of F(A). F is applied to the
/// grid of A at half the cell size; a cell of side delta counts when some
/// image lands in it. The raster error is at most 2 sqrt2 delta per unit of
/// boundary length, so bias_band = 2 sqrt2 delta perimeter(A). ok when
/// loss <= C(d, r) displacement + 4 stderr + bias_band.
MeasureLoss verify_measure_loss(const SetSpec& A, const Map& F, double displacement, std::size_t n,
                                std::size_t raster, SampleStream& stream);

struct TranslationCheck {
  std::size_t components = 0;
  std::size_t pixels = 0;
  double max_variance = 0.0;
};

/// Pixels of the bbox raster outside S(f) grouped by 4-adjacency; within each
/// group F(x) - x should be constant. Reports the worst per-group variance.
TranslationCheck translation_check(const PolyhedralFunc& f, const BoundingBox& bb, std::size_t raster,
                                   const Tolerances& tol = {},
                                   const std::function<bool(const Point&)>& restrict_to = {});

struct PipelineReport {
  std::string set_name;
  std::string strategy;
  double eps_target = 0.0;
  std::size_t cover_strips = 0;
  double cover_width_bound = 0.0;
  std::size_t boundary_samples = 0;
  std::size_t boundary_violations = 0;
  std::size_t pieces = 0;
  double strip_width_bound = 0.0;
  double lip = 0.0;
  double max_displacement = 0.0;
  std::size_t displacement_samples = 0;
  std::size_t lipschitz_pairs = 0;
  std::size_t lipschitz_pair_violations = 0;
  double flatten_residual = 0.0;
  std::size_t flatten_samples = 0;
  /// Points in S(f) only within the activity tolerance; not counted above.
  std::size_t flatten_band_samples = 0;
  std::optional<TranslationCheck> translation;
  MeasureLoss measure;
  /// Monte-Carlo lambda(A cap S) / lip(f).
  double observed_strip_constant = 0.0;
  double strip_area = 0.0;
  double strip_area_stderr = 0.0;
  std::vector<std::string> failures;

  bool passed() const noexcept { return failures.empty(); }
};

CoverResult build_boundary_cover(const SetSpec& A, const PipelineConfig& cfg);

struct PipelineResult {
  GenStrip strip;
  PipelineReport report;

  Point map(const Point& x, const Tolerances& tol = {}) const;
};

/// Cover the boundary, merge, and verify F = prox_f. Invariant failures are
/// listed in report.failures; the caller decides whether they are fatal.
PipelineResult run_pipeline(const SetSpec& A, const PipelineConfig& cfg);

}  // namespace kolmo
