#include "kolmo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "kolmo/hull.hpp"

namespace kolmo {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Frame {
  BoundingBox bb;
  std::size_t w;
  std::size_t h;
  double px;

  Frame(const BoundingBox& box, std::size_t resolution) : bb(box) {
    require_dim(2, box.dim(), "svg frame");
    px = box.max_extent() / static_cast<double>(resolution);
    w = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((box.high[0] - box.low[0]) / px)));
    h = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((box.high[1] - box.low[1]) / px)));
  }
  Point center(std::size_t i, std::size_t j) const {
    return {bb.low[0] + (static_cast<double>(i) + 0.5) * px, bb.high[1] - (static_cast<double>(j) + 0.5) * px};
  }
  double sx(double x) const { return (x - bb.low[0]) / px; }
  double sy(double y) const { return (bb.high[1] - y) / px; }
};

std::string header(const Frame& fr, const std::string& title) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<!-- kolmo " << KOLMO_VERSION << " -->\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fr.w * 3 << "\" height=\""
    << fr.h * 3 << "\" viewBox=\"0 0 " << fr.w << ' ' << fr.h << "\" shape-rendering=\"crispEdges\">\n";
  if (!title.empty()) o << "<title>" << title << "</title>\n";
  return o.str();
}

// Row-wise run-length rectangles for a color-per-pixel image.
void emit_runs(std::ostringstream& o, const Frame& fr, const std::vector<std::string>& color) {
  for (std::size_t j = 0; j < fr.h; ++j) {
    std::size_t i = 0;
    while (i < fr.w) {
      const std::string& c = color[j * fr.w + i];
      std::size_t k = i + 1;
      while (k < fr.w && color[j * fr.w + k] == c) ++k;
      if (!c.empty()) {
        o << "<rect x=\"" << i << "\" y=\"" << j << "\" width=\"" << (k - i) << "\" height=\"1\" fill=\"" << c
          << "\"/>\n";
      }
      i = k;
    }
  }
}

std::string pastel(std::size_t key) {
  const std::uint64_t h = splitmix64(key + 17);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<unsigned>(170 + (h & 0x3f)),
                static_cast<unsigned>(170 + ((h >> 8) & 0x3f)), static_cast<unsigned>(170 + ((h >> 16) & 0x3f)));
  return buf;
}

void emit_plane(std::ostringstream& o, const Frame& fr, const Hyperplane& hp, const char* stroke) {
  // Clip {n . x = b} to the box by intersecting with its four sides.
  std::vector<Point> hits;
  const Point& lo = fr.bb.low;
  const Point& hi = fr.bb.high;
  const double n0 = hp.normal[0];
  const double n1 = hp.normal[1];
  if (std::abs(n1) > 1e-12) {
    for (double x : {lo[0], hi[0]}) {
      const double y = (hp.offset - n0 * x) / n1;
      if (y >= lo[1] - 1e-12 && y <= hi[1] + 1e-12) hits.push_back(Point{x, y});
    }
  }
  if (std::abs(n0) > 1e-12) {
    for (double y : {lo[1], hi[1]}) {
      const double x = (hp.offset - n1 * y) / n0;
      if (x >= lo[0] - 1e-12 && x <= hi[0] + 1e-12) hits.push_back(Point{x, y});
    }
  }
  if (hits.size() < 2) return;
  std::size_t a = 0;
  std::size_t b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      if (distance(hits[i], hits[j]) > best) {
        best = distance(hits[i], hits[j]);
        a = i;
        b = j;
      }
    }
  }
  o << "<line x1=\"" << num(fr.sx(hits[a][0])) << "\" y1=\"" << num(fr.sy(hits[a][1])) << "\" x2=\""
    << num(fr.sx(hits[b][0])) << "\" y2=\"" << num(fr.sy(hits[b][1])) << "\" stroke=\"" << stroke
    << "\" stroke-width=\"0.4\"/>\n";
}

}  // namespace

RenderResult render_strip(const PolyhedralFunc& f, const BoundingBox& bb, const RenderOptions& opt) {
  require_dim(2, f.dim(), "render_strip");
  const Frame fr(bb, opt.resolution);
  const std::size_t n = fr.w * fr.h;
  std::vector<std::size_t> sig_id(n);
  std::vector<PixelKind> kind(n);
  std::map<std::vector<std::size_t>, std::size_t> sigs;
  std::vector<std::size_t> warm;
  for (std::size_t j = 0; j < fr.h; ++j) {
    for (std::size_t i = 0; i < fr.w; ++i) {
      const ProxResult pr = prox(f, fr.center(i, j), opt.tol, warm);
      warm = pr.active;
      const std::size_t p = j * fr.w + i;
      sig_id[p] = sigs.emplace(pr.active, sigs.size()).first->second;
      if (pr.differentiable) {
        kind[p] = PixelKind::outside_strip;
      } else {
        std::vector<Point> g;
        for (std::size_t a : pr.active) g.push_back(f.gradient_point(a));
        kind[p] = affine_rank(g, 1e-9) >= 2 ? PixelKind::collapse : PixelKind::strip;
      }
    }
  }

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t j = 0; j < fr.h; ++j) {
    for (std::size_t i = 0; i < fr.w; ++i) {
      const std::size_t p = j * fr.w + i;
      if (i + 1 < fr.w && sig_id[p + 1] == sig_id[p]) parent[find(p)] = find(p + 1);
      if (j + 1 < fr.h && sig_id[p + fr.w] == sig_id[p]) parent[find(p)] = find(p + fr.w);
    }
  }
  RenderResult out;
  out.stats.width = fr.w;
  out.stats.height = fr.h;
  for (std::size_t p = 0; p < n; ++p) {
    if (find(p) != p) continue;
    ++out.stats.regions;
    if (kind[p] != PixelKind::outside_strip) ++out.stats.strip_regions;
    if (kind[p] == PixelKind::collapse) ++out.stats.collapse_regions;
  }

  std::vector<std::string> color(n);
  for (std::size_t p = 0; p < n; ++p) {
    switch (kind[p]) {
      case PixelKind::outside_strip: color[p] = pastel(sig_id[p]); break;
      case PixelKind::strip: color[p] = "#9a9a9a"; break;
      case PixelKind::collapse: color[p] = "#3c3c3c"; break;
    }
  }
  std::ostringstream o;
  o << header(fr, opt.title);
  emit_runs(o, fr, color);
  if (opt.hyperplanes) {
    ImageHyperplaneOptions ho;
    ho.coactive_only = opt.coactive_only;
    for (const Hyperplane& hp : image_hyperplanes(GenStrip(f), ho).planes) emit_plane(o, fr, hp, "#c0392b");
  }
  for (const Point& x : opt.points) {
    o << "<circle cx=\"" << num(fr.sx(x[0])) << "\" cy=\"" << num(fr.sy(x[1])) << "\" r=\"0.6\" fill=\"#1f4e9a\"/>\n";
  }
  o << "</svg>\n";
  out.svg = o.str();
  return out;
}

std::string render_pipeline(const SetSpec& A, const PipelineResult& run, const RenderOptions& opt) {
  require_dim(2, A.dim, "render_pipeline");
  const BoundingBox bb = A.bbox.expanded(0.05 * A.bbox.max_extent());
  const Frame fr(bb, opt.resolution);
  std::vector<std::string> color(fr.w * fr.h);
  std::vector<std::size_t> warm;
  for (std::size_t j = 0; j < fr.h; ++j) {
    for (std::size_t i = 0; i < fr.w; ++i) {
      const Point x = fr.center(i, j);
      const ProxResult pr = prox(run.strip.f, x, opt.tol, warm);
      warm = pr.active;
      const bool in_a = A.contains(x);
      if (!pr.differentiable) color[j * fr.w + i] = in_a ? "#7a7a7a" : "#c8c8c8";
      else if (in_a) color[j * fr.w + i] = "#a9c7e8";
    }
  }
  std::ostringstream o;
  o << header(fr, opt.title.empty() ? A.name : opt.title);
  o << "<rect x=\"0\" y=\"0\" width=\"" << fr.w << "\" height=\"" << fr.h << "\" fill=\"#ffffff\"/>\n";
  emit_runs(o, fr, color);
  o << "<g fill=\"#c0392b\">\n";
  for (const Point& x : opt.points) {
    const Point y = run.map(x, opt.tol);
    o << "<circle cx=\"" << num(fr.sx(y[0])) << "\" cy=\"" << num(fr.sy(y[1])) << "\" r=\"0.35\"/>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

}  // namespace kolmo
