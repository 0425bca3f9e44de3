#include "qaida/raster.hpp"

#include <algorithm>
#include <cmath>

#include "qaida/error.hpp"
#include "qaida/utf8.hpp"

namespace qaida {

namespace {

struct Vec2 {
  double x, y;
};

Vec2 mid(Vec2 a, Vec2 b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

// Walks a TrueType contour as a sequence of line and quadratic segments.
template <class LineFn, class QuadFn>
void walk_contour(const std::vector<OutlinePoint>& pts, double pen_x, LineFn&& line, QuadFn&& quad) {
  const std::size_t n = pts.size();
  auto at = [&](std::size_t i) { return Vec2{pts[i % n].x + pen_x, pts[i % n].y}; };
  auto on = [&](std::size_t i) { return pts[i % n].on_curve; };

  // Start on an on-curve point; if there is none, at the implied midpoint.
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (on(i)) {
      first = i;
      break;
    }
  }
  Vec2 start;
  std::size_t begin;
  if (first == n) {
    start = mid(at(0), at(1));
    begin = 1;
  } else {
    start = at(first);
    begin = first + 1;
  }

  Vec2 cur = start;
  bool have_ctrl = false;
  Vec2 ctrl{};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = begin + k;
    const Vec2 p = at(i);
    if (on(i)) {
      if (have_ctrl) {
        quad(cur, ctrl, p);
        have_ctrl = false;
      } else {
        line(cur, p);
      }
      cur = p;
    } else if (have_ctrl) {
      const Vec2 m = mid(ctrl, p);
      quad(cur, ctrl, m);
      cur = m;
      ctrl = p;
    } else {
      ctrl = p;
      have_ctrl = true;
    }
  }
  if (have_ctrl) {
    quad(cur, ctrl, start);
  } else if (cur.x != start.x || cur.y != start.y) {
    line(cur, start);
  }
}

void include(BBox& b, bool& any, double x, double y) {
  if (!any) {
    b = {x, y, x, y};
    any = true;
    return;
  }
  b.xmin = std::min(b.xmin, x);
  b.ymin = std::min(b.ymin, y);
  b.xmax = std::max(b.xmax, x);
  b.ymax = std::max(b.ymax, y);
}

// Parameter of the extremum of a 1-D quadratic Bézier, if interior.
bool quad_extremum(double p0, double p1, double p2, double& t) {
  const double denom = p0 - 2 * p1 + p2;
  if (denom == 0) return false;
  t = (p0 - p1) / denom;
  return t > 0 && t < 1;
}

double quad_at(double p0, double p1, double p2, double t) {
  const double u = 1 - t;
  return u * u * p0 + 2 * u * t * p1 + t * t * p2;
}

}  // namespace

void RasterConfig::validate() const {
  if (canvas_px < 1) throw Error(Errc::InvalidArgument, "canvas_px must be positive");
  if (!(fit_fraction > 0 && fit_fraction <= 1)) throw Error(Errc::InvalidArgument, "fit_fraction must be in (0,1]");
  if (supersample < 1) throw Error(Errc::InvalidArgument, "supersample must be >= 1");
  if (binarize_threshold < 0 || binarize_threshold > 255) {
    throw Error(Errc::InvalidArgument, "binarize_threshold must be in [0,255]");
  }
  if (!(flatness_px > 0)) throw Error(Errc::InvalidArgument, "flatness_px must be positive");
}

bool ink_bounds(std::span<const PlacedGlyph> glyphs, BBox& out) {
  bool any = false;
  for (const auto& g : glyphs) {
    for (const auto& contour : g.outline->contours) {
      walk_contour(
          contour, g.pen_x, [&](Vec2 a, Vec2 b) {
            include(out, any, a.x, a.y);
            include(out, any, b.x, b.y);
          },
          [&](Vec2 a, Vec2 c, Vec2 b) {
            include(out, any, a.x, a.y);
            include(out, any, b.x, b.y);
            double t;
            if (quad_extremum(a.x, c.x, b.x, t)) include(out, any, quad_at(a.x, c.x, b.x, t), quad_at(a.y, c.y, b.y, t));
            if (quad_extremum(a.y, c.y, b.y, t)) include(out, any, quad_at(a.x, c.x, b.x, t), quad_at(a.y, c.y, b.y, t));
          });
    }
  }
  return any;
}

DeviceTransform fit_transform(const BBox& bounds, const RasterConfig& cfg) {
  const double side = std::max(bounds.width(), bounds.height());
  DeviceTransform xf;
  xf.scale = side > 0 ? cfg.fit_fraction * cfg.canvas_px / side : 1.0;
  xf.origin_x = (bounds.xmin + bounds.xmax) / 2;
  xf.origin_y = (bounds.ymin + bounds.ymax) / 2;
  xf.offset_x = cfg.canvas_px / 2.0;
  xf.offset_y = cfg.canvas_px / 2.0;
  return xf;
}

std::vector<Edge> flatten(std::span<const PlacedGlyph> glyphs, const DeviceTransform& xf, double flatness_px) {
  std::vector<Edge> edges;
  auto dev = [&](Vec2 p) { return Vec2{xf.to_x(p.x), xf.to_y(p.y)}; };
  for (const auto& g : glyphs) {
    for (const auto& contour : g.outline->contours) {
      walk_contour(
          contour, g.pen_x,
          [&](Vec2 a, Vec2 b) {
            const Vec2 da = dev(a), db = dev(b);
            edges.push_back({da.x, da.y, db.x, db.y});
          },
          [&](Vec2 a, Vec2 c, Vec2 b) {
            const Vec2 p0 = dev(a), p1 = dev(c), p2 = dev(b);
            // Chord error over a parameter step h is |p0 - 2p1 + p2| h² / 4.
            const double dx = p0.x - 2 * p1.x + p2.x;
            const double dy = p0.y - 2 * p1.y + p2.y;
            const double dd = std::sqrt(dx * dx + dy * dy);
            const int steps = std::max(1, int(std::ceil(std::sqrt(dd / (4 * flatness_px)))));
            Vec2 prev = p0;
            for (int s = 1; s <= steps; ++s) {
              const double t = double(s) / steps;
              const Vec2 p = s == steps ? p2 : Vec2{quad_at(p0.x, p1.x, p2.x, t), quad_at(p0.y, p1.y, p2.y, t)};
              edges.push_back({prev.x, prev.y, p.x, p.y});
              prev = p;
            }
          });
    }
  }
  return edges;
}

RasterImage fill_edges(std::span<const Edge> edges, int width, int height, int supersample, std::uint8_t background,
                       std::uint8_t ink) {
  const int S = supersample;
  const int rows = height * S;
  const int cols = width * S;

  // Sample row j sits at device y = (j + 0.5) / S. An edge spanning
  // [ymin, ymax) covers rows ceil(ymin*S - 0.5) .. ceil(ymax*S - 0.5) - 1.
  struct Active {
    double x_at_row0;  // x at the first covered sample row
    double dx_per_row;
    int dir;
    int row_begin;
    int row_end;
  };
  std::vector<Active> active;
  active.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.y0 == e.y1) continue;
    const int dir = e.y1 > e.y0 ? 1 : -1;
    const double ylo = std::min(e.y0, e.y1), yhi = std::max(e.y0, e.y1);
    const int rb = std::max(0, int(std::ceil(ylo * S - 0.5)));
    const int re = std::min(rows, int(std::ceil(yhi * S - 0.5)));
    if (rb >= re) continue;
    const double inv_slope = (e.x1 - e.x0) / (e.y1 - e.y0);
    const double y_first = (rb + 0.5) / S;
    active.push_back({e.x0 + (y_first - e.y0) * inv_slope, inv_slope / S, dir, rb, re});
  }
  std::sort(active.begin(), active.end(), [](const Active& a, const Active& b) { return a.row_begin < b.row_begin; });

  std::vector<int> counts(std::size_t(width) * height, 0);
  std::vector<std::pair<double, int>> crossings;
  std::vector<std::size_t> live;
  std::size_t next = 0;
  for (int j = 0; j < rows; ++j) {
    while (next < active.size() && active[next].row_begin <= j) live.push_back(next++);
    std::erase_if(live, [&](std::size_t k) { return active[k].row_end <= j; });
    if (live.empty()) continue;
    crossings.clear();
    for (std::size_t k : live) {
      const Active& a = active[k];
      crossings.emplace_back(a.x_at_row0 + (j - a.row_begin) * a.dx_per_row, a.dir);
    }
    std::sort(crossings.begin(), crossings.end());
    int* row_counts = &counts[std::size_t(j / S) * width];
    int winding = 0;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
      winding += crossings[c].second;
      if (winding == 0) continue;
      // Sample columns with centers in [xa, xb).
      const int ka = std::max(0, int(std::ceil(crossings[c].first * S - 0.5)));
      const int kb = std::min(cols, int(std::ceil(crossings[c + 1].first * S - 0.5)));
      for (int k = ka; k < kb; ++k) ++row_counts[k / S];
    }
  }

  RasterImage img(width, height, background);
  const int total = S * S;
  const int span = int(ink) - int(background);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    // background + span * c / total, rounded half away from zero.
    const int num = span * counts[i] * 2;
    const int delta = num >= 0 ? (num + total) / (2 * total) : -((-num + total) / (2 * total));
    img.pixels[i] = static_cast<std::uint8_t>(int(background) + delta);
  }
  return img;
}

RasterImage rasterize_glyphs(std::span<const GlyphOutline> glyphs, const RasterConfig& cfg) {
  cfg.validate();
  if (glyphs.empty()) throw Error(Errc::EmptyRun, "nothing to render");
  std::vector<PlacedGlyph> placed;
  placed.reserve(glyphs.size());
  double pen = 0;
  for (const auto& g : glyphs) {
    placed.push_back({&g, pen});
    pen += g.advance_width;
  }
  BBox bounds;
  if (!ink_bounds(placed, bounds)) return RasterImage(cfg.canvas_px, cfg.canvas_px, cfg.background);
  const DeviceTransform xf = fit_transform(bounds, cfg);
  const auto edges = flatten(placed, xf, cfg.flatness_px);
  return fill_edges(edges, cfg.canvas_px, cfg.canvas_px, cfg.supersample, cfg.background, cfg.ink);
}

RasterImage rasterize(const ShapedRun& run, const FontRecord& font, const RasterConfig& cfg) {
  if (run.forms.empty()) throw Error(Errc::EmptyRun, "shaped run has no forms");
  std::vector<GlyphOutline> outlines;
  outlines.reserve(run.forms.size());
  for (const auto& f : run.forms) {
    if (!font.covers(f.codepoint)) {
      throw Error(Errc::UnmappedForm, format_codepoint(f.codepoint) + " missing from " + font.family_name());
    }
    outlines.push_back(glyph_for_codepoint(font, f.codepoint));
  }
  return rasterize_glyphs(outlines, cfg);
}

RasterImage binarize(const RasterImage& img, int threshold) {
  RasterImage out = img;
  for (auto& p : out.pixels) p = p < threshold ? 0 : 255;
  return out;
}

RasterImage downscale_2x(const RasterImage& img) {
  if (img.width % 2 != 0 || img.height % 2 != 0) {
    throw Error(Errc::OddDimensions, std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  RasterImage out(img.width / 2, img.height / 2, 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const int sum = img.at(2 * x, 2 * y) + img.at(2 * x + 1, 2 * y) + img.at(2 * x, 2 * y + 1) + img.at(2 * x + 1, 2 * y + 1);
      out.at(x, y) = static_cast<std::uint8_t>((sum + 2) / 4);
    }
  }
  return out;
}

}  // namespace qaida
