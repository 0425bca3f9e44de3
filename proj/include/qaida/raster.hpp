#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qaida/font.hpp"
#include "qaida/shaping.hpp"

namespace qaida {

struct RasterConfig {
  int canvas_px = 160;
  double fit_fraction = 0.8;
  int supersample = 4;  // per axis
  std::uint8_t background = 255;
  std::uint8_t ink = 0;
  int binarize_threshold = 128;
  double flatness_px = 0.25;  // max chord deviation when flattening curves

  void validate() const;
};

struct RasterImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  RasterImage() = default;
  RasterImage(int w, int h, std::uint8_t fill) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}

  std::uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
  std::uint8_t& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;
};

/// A line segment in device space (y down).
struct Edge {
  double x0, y0, x1, y1;
};

/// A glyph outline positioned in font units: `pen_x` is added to each x.
struct PlacedGlyph {
  const GlyphOutline* outline = nullptr;
  double pen_x = 0;
};

/// Font-unit to device mapping: device = ((x - origin_x) * scale + offset_x,
/// offset_y - (y - origin_y) * scale).
struct DeviceTransform {
  double scale = 1;
  double origin_x = 0;
  double origin_y = 0;
  double offset_x = 0;
  double offset_y = 0;

  double to_x(double x) const { return (x - origin_x) * scale + offset_x; }
  double to_y(double y) const { return offset_y - (y - origin_y) * scale; }
};

/// Exact extent of the filled outline (on-curve points and curve extrema), font units.
/// Returns false when the glyphs have no contours.
bool ink_bounds(std::span<const PlacedGlyph> glyphs, BBox& out);

/// Uniform scale so the larger side of `bounds` spans fit_fraction × canvas,
/// centered on the canvas.
DeviceTransform fit_transform(const BBox& bounds, const RasterConfig& cfg);

/// Flattens TrueType contours (implicit on-curve midpoints) into device edges.
std::vector<Edge> flatten(std::span<const PlacedGlyph> glyphs, const DeviceTransform& xf, double flatness_px);

/// Non-zero winding scanline fill with supersample² point samples per pixel.
RasterImage fill_edges(std::span<const Edge> edges, int width, int height, int supersample, std::uint8_t background,
                       std::uint8_t ink);

/// Lays out `run` left-to-right by advance widths and renders it.
/// Throws Error{EmptyRun} for a run with no forms and Error{UnmappedForm}
/// when the font lacks one of the presentation forms.
RasterImage rasterize(const ShapedRun& run, const FontRecord& font, const RasterConfig& cfg);

/// Same layout and fill for outlines that did not come from shaping.
RasterImage rasterize_glyphs(std::span<const GlyphOutline> glyphs, const RasterConfig& cfg);

/// pixel < threshold → 0, else 255.
RasterImage binarize(const RasterImage& img, int threshold);

/// Rounded (half-up) mean of each 2×2 block. Throws Error{OddDimensions}.
RasterImage downscale_2x(const RasterImage& img);

}  // namespace qaida
