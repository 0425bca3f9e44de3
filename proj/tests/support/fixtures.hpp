#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ttf_writer.hpp"

namespace qaida::testing {

inline constexpr char32_t kSquareCp = U'A';
inline constexpr char32_t kSpaceCp = U' ';

/// .notdef, a 4-point square at kSquareCp, an empty glyph at U+0020.
FontSpec minimal_font_spec();

/// Square covering the central 50% of a 1000-unit em, mapped at kSquareCp.
FontSpec square_font_spec();

/// Right triangle (0,0) (800,0) (0,600) mapped at U+0042.
FontSpec triangle_font_spec();

/// Glyphs 1..depth+1 where glyph k>1 references glyph k-1; glyph 1 is a
/// square. Glyph depth+1 is mapped at U+0043.
FontSpec composite_chain_spec(int depth);

/// Procedurally drawn font covering every Urdu letter and presentation form
/// used by the shaper. Forms are composites of a shared letter body and a
/// connector bar, so the composite path is exercised end to end.
/// `missing` lists codepoints to leave out of the cmap.
FontSpec synthetic_urdu_font_spec(int variant, const std::vector<char32_t>& missing = {});

/// Seeded pseudo-Urdu text; each line holds words of 1..7 letters.
std::string synthetic_corpus(int lines, std::uint64_t seed);

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Writes `count` synthetic fonts as <dir>/fixture_NN.ttf and returns the paths.
std::vector<std::filesystem::path> write_synthetic_fonts(const std::filesystem::path& dir, int count);

}  // namespace qaida::testing
