#pragma once

// Minimal TrueType writer for test fixtures: head, hhea, maxp, cmap
// (format 4 or 12), loca, glyf (simple and composite), hmtx, name, post.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qaida::testing {

struct FixturePoint {
  int x = 0;
  int y = 0;
  bool on_curve = true;
};

using FixtureContour = std::vector<FixturePoint>;

struct FixtureComponent {
  std::uint16_t glyph = 0;
  int dx = 0;
  int dy = 0;
  double scale = 1.0;  // uniform; written as F2Dot14 when != 1
};

struct FixtureGlyph {
  std::vector<FixtureContour> contours;      // simple glyph
  std::vector<FixtureComponent> components;  // composite glyph when non-empty
  int advance = 0;
};

struct FontSpec {
  std::string family = "Fixture";
  int units_per_em = 1000;
  int ascender = 800;
  int descender = -200;
  std::vector<FixtureGlyph> glyphs;  // glyph 0 is .notdef
  std::vector<std::pair<char32_t, std::uint16_t>> cmap;
  bool cmap_format12 = false;
  bool long_loca = false;
};

std::vector<std::uint8_t> build_ttf(const FontSpec& spec);

/// Table offset/length from a built font's directory, for corruption tests.
struct TableSpan {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
  std::size_t record = 0;  // byte offset of the table's directory record
};
TableSpan find_table(const std::vector<std::uint8_t>& font, const char (&tag)[5]);

FixtureContour rect(int x0, int y0, int x1, int y1);  // counter-clockwise
FixtureContour reversed(FixtureContour c);

}  // namespace qaida::testing
