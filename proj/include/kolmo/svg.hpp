#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kolmo/gstrip.hpp"
#include "kolmo/kolmap.hpp"
#include "kolmo/setlib.hpp"

namespace kolmo {

struct RenderOptions {
  /// Pixels across the longer side of the box.
  std::size_t resolution = 240;
  bool hyperplanes = true;
  bool coactive_only = true;
  std::vector<Point> points;
  std::string title;
  Tolerances tol{};
};

enum class PixelKind { outside_strip, strip, collapse };

struct RegionStats {
  std::size_t regions = 0;          // 4-connected groups of equal active signature
  std::size_t strip_regions = 0;    // of which inside S(f)
  std::size_t collapse_regions = 0; // of which map to a single point
  std::size_t width = 0;
  std::size_t height = 0;
};

struct RenderResult {
  std::string svg;
  RegionStats stats;
};

/// Colors each pixel by the sorted active signature of prox_f at its center:
/// translation regions in light hues, S(f) in grey, and pixels whose active
/// gradients span the plane (mapped to one point) in dark grey.
RenderResult render_strip(const PolyhedralFunc& f, const BoundingBox& bb, const RenderOptions& opt = {});

/// The set, the merged strip inside its box, and images of sample points.
std::string render_pipeline(const SetSpec& A, const PipelineResult& run, const RenderOptions& opt = {});

}  // namespace kolmo
