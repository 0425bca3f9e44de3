#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace qaida {

struct OutlinePoint {
  double x = 0;
  double y = 0;
  bool on_curve = true;
};

struct BBox {
  double xmin = 0;
  double ymin = 0;
  double xmax = 0;
  double ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
};

/// Resolved glyph geometry in font units. Contours keep TrueType point
/// semantics: consecutive off-curve points imply an on-curve midpoint.
struct GlyphOutline {
  std::vector<std::vector<OutlinePoint>> contours;
  int advance_width = 0;
  BBox bbox;

  bool empty() const { return contours.empty(); }
};

namespace detail {
struct FontData;
}

/// Immutable view of a parsed TrueType font. Copies share the underlying
/// bytes, so a record can be handed to any number of worker threads.
class FontRecord {
 public:
  int font_id() const { return font_id_; }
  const std::string& family_name() const { return family_name_; }
  const std::string& file_path() const { return file_path_; }
  int units_per_em() const { return units_per_em_; }
  int ascender() const { return ascender_; }
  int descender() const { return descender_; }
  int glyph_count() const { return glyph_count_; }

  /// Sorted ascending, no duplicates.
  const std::vector<char32_t>& coverage() const { return coverage_; }
  bool covers(char32_t cp) const;

  /// Glyph index for `cp`, or 0 (.notdef) when unmapped.
  std::uint16_t glyph_index(char32_t cp) const;

  FontRecord with_id(int font_id) const;

 private:
  friend FontRecord load_font_bytes(std::vector<std::uint8_t> bytes, int font_id, std::string file_path);
  friend GlyphOutline glyph_outline(const FontRecord& font, std::uint16_t glyph_id);

  int font_id_ = 0;
  std::string family_name_;
  std::string file_path_;
  int units_per_em_ = 0;
  int ascender_ = 0;
  int descender_ = 0;
  int glyph_count_ = 0;
  std::vector<char32_t> coverage_;
  std::shared_ptr<const detail::FontData> data_;
};

// Throws Error{NotAFont | MissingTable | MalformedTable}.
FontRecord load_font(const std::filesystem::path& path, int font_id = 0);
FontRecord load_font_bytes(std::vector<std::uint8_t> bytes, int font_id = 0, std::string file_path = {});

// Throws Error{MalformedGlyph} for inconsistent contour data, composite
// recursion deeper than kMaxCompositeDepth, or out-of-range glyph ids.
GlyphOutline glyph_outline(const FontRecord& font, std::uint16_t glyph_id);
// Throws Error{Unmapped} when `cp` is not in the font's coverage.
GlyphOutline glyph_for_codepoint(const FontRecord& font, char32_t cp);

inline constexpr int kMaxCompositeDepth = 8;

struct FilterResult {
  std::vector<char32_t> canonical_set;
  std::vector<FontRecord> kept;
};

/// Coverage-vote font filtering. Each font's signature is its coverage
/// restricted to `alphabet`; the most common non-empty signature wins (ties:
/// larger set, then lexicographically smaller sorted sequence), and every
/// font whose signature contains the winner is kept, ordered by font_id.
FilterResult filter_fonts(std::span<const FontRecord> fonts, std::span<const char32_t> alphabet);

/// One line of fonts.jsonl.
struct FontListing {
  int font_id = 0;
  std::string family;
  std::string file;
  int units_per_em = 0;
  int coverage_size = 0;
  bool kept = false;
};

FontListing listing_for(const FontRecord& font, bool kept);
void write_fonts_jsonl(const std::filesystem::path& path, std::span<const FontListing> fonts);
std::vector<FontListing> read_fonts_jsonl(const std::filesystem::path& path);

}  // namespace qaida
