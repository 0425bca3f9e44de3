#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qaida/shaping.hpp"
#include "qaida/utf8.hpp"

namespace qaida::testing {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

FixtureGlyph simple(std::vector<FixtureContour> contours, int advance) {
  FixtureGlyph g;
  g.contours = std::move(contours);
  g.advance = advance;
  return g;
}

// Closed blob of k off-curve points; every on-curve point is implied.
FixtureContour blob(int cx, int cy, int rx, int ry, int k, double phase) {
  FixtureContour c;
  for (int i = 0; i < k; ++i) {
    const double a = phase + 2 * std::numbers::pi * i / k;
    c.push_back({cx + int(std::lround(rx * std::cos(a))), cy + int(std::lround(ry * std::sin(a))), false});
  }
  return c;
}

}  // namespace

FontSpec minimal_font_spec() {
  FontSpec spec;
  spec.family = "Fixture Minimal";
  spec.glyphs.push_back(simple({rect(50, 0, 450, 700), reversed(rect(100, 50, 400, 650))}, 500));
  spec.glyphs.push_back(simple({rect(100, 0, 700, 600)}, 800));
  spec.glyphs.push_back(simple({}, 250));
  spec.cmap = {{kSquareCp, 1}, {kSpaceCp, 2}};
  return spec;
}

FontSpec square_font_spec() {
  FontSpec spec = minimal_font_spec();
  spec.family = "Fixture Square";
  spec.glyphs[1] = simple({rect(250, 250, 750, 750)}, 1000);
  return spec;
}

FontSpec triangle_font_spec() {
  FontSpec spec = minimal_font_spec();
  spec.family = "Fixture Triangle";
  spec.glyphs.push_back(simple({{{0, 0, true}, {800, 0, true}, {0, 600, true}}}, 900));
  spec.cmap.push_back({U'B', 3});
  return spec;
}

FontSpec composite_chain_spec(int depth) {
  FontSpec spec;
  spec.family = "Fixture Composite";
  spec.long_loca = true;
  spec.glyphs.push_back(simple({}, 500));
  spec.glyphs.push_back(simple({rect(0, 0, 100, 100)}, 500));
  for (int k = 0; k < depth; ++k) {
    FixtureGlyph g;
    g.components.push_back({std::uint16_t(spec.glyphs.size() - 1), 10, 0, 1.0});
    g.advance = 500;
    spec.glyphs.push_back(g);
  }
  spec.cmap = {{U'C', std::uint16_t(spec.glyphs.size() - 1)}};
  return spec;
}

FontSpec synthetic_urdu_font_spec(int variant, const std::vector<char32_t>& missing) {
  const std::uint64_t vseed = mix(std::uint64_t(variant) * 7919 + 17);
  FontSpec spec;
  spec.family = "Fixture Urdu " + std::to_string(variant);
  spec.cmap_format12 = variant % 2 == 1;
  spec.long_loca = variant % 3 == 0;
  const int bar = 50 + int(vseed % 40);
  const double scale = variant % 4 == 2 ? 0.875 : 1.0;

  spec.glyphs.push_back(simple({rect(50, 0, 450, 700), reversed(rect(100, 50, 400, 650))}, 500));
  const std::uint16_t space = std::uint16_t(spec.glyphs.size());
  spec.glyphs.push_back(simple({}, 250));
  const std::uint16_t bar_left = std::uint16_t(spec.glyphs.size());
  spec.glyphs.push_back(simple({rect(0, 0, 300, bar)}, 0));
  const std::uint16_t bar_right = std::uint16_t(spec.glyphs.size());
  spec.glyphs.push_back(simple({rect(300, 0, 600, bar)}, 0));

  auto skip = [&](char32_t cp) { return std::find(missing.begin(), missing.end(), cp) != missing.end(); };
  auto map = [&](char32_t cp, std::uint16_t g) {
    if (cp != 0 && !skip(cp)) spec.cmap.push_back({cp, g});
  };
  auto composite = [&](std::vector<FixtureComponent> parts) {
    FixtureGlyph g;
    g.components = std::move(parts);
    g.advance = 600;
    spec.glyphs.push_back(g);
    return std::uint16_t(spec.glyphs.size() - 1);
  };

  std::map<char32_t, std::uint16_t> bodies;
  for (char32_t base : urdu_letters()) {
    const std::uint64_t h = mix(vseed ^ base);
    std::vector<FixtureContour> contours;
    const int rx = 140 + int(h % 120);
    const int ry = 90 + int((h >> 8) % 140);
    const int k = 4 + int((h >> 16) % 4);
    contours.push_back(blob(300, bar + ry, rx, ry, k, double((h >> 20) % 628) / 100));
    if ((h >> 30) % 3 == 0) contours.push_back(rect(270, bar, 330, bar + 2 * ry + 250));
    const int dots = int((h >> 34) % 4);
    const bool above = (h >> 40) % 2;
    for (int d = 0; d < dots; ++d) {
      const int x = 300 + (d - dots / 2) * 90;
      const int y = above ? bar + 2 * ry + 60 : -160;
      contours.push_back(rect(x - 35, y, x + 35, y + 70));
    }
    spec.glyphs.push_back(simple(std::move(contours), 600));
    bodies[base] = std::uint16_t(spec.glyphs.size() - 1);
  }

  for (char32_t base : urdu_letters()) {
    const std::uint16_t body = bodies[base];
    const std::uint16_t iso = composite({{body, 0, 0, scale}});
    map(base, iso);
    map(presentation_form(base, FormClass::Isolated), iso);
    const JoiningType jt = joining_type(base);
    if (jt == JoiningType::D || jt == JoiningType::R) {
      map(presentation_form(base, FormClass::Final), composite({{body, 0, 0, scale}, {bar_right, 0, 0, 1.0}}));
    }
    if (jt == JoiningType::D) {
      map(presentation_form(base, FormClass::Initial), composite({{body, 0, 0, scale}, {bar_left, 0, 0, 1.0}}));
      map(presentation_form(base, FormClass::Medial),
          composite({{body, 0, 0, scale}, {bar_left, 0, 0, 1.0}, {bar_right, 0, 0, 1.0}}));
    }
  }

  // Lam-alef: alef body stacked to the left of the lam body.
  const std::u32string lam_alef_iso = {0xFEF5, 0xFEF7, 0xFEF9, 0xFEFB};
  const std::u32string alefs = {0x0622, 0x0623, 0x0625, 0x0627};
  for (std::size_t i = 0; i < alefs.size(); ++i) {
    if (!bodies.contains(alefs[i])) continue;
    const std::uint16_t lam = bodies[0x0644], alef = bodies[alefs[i]];
    map(lam_alef_iso[i], composite({{lam, 200, 0, 1.0}, {alef, -200, 0, 1.0}}));
    map(lam_alef_iso[i] + 1, composite({{lam, 200, 0, 1.0}, {alef, -200, 0, 1.0}, {bar_right, 200, 0, 1.0}}));
  }
  map(kSpaceCp, space);
  return spec;
}

std::string synthetic_corpus(int lines, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto letters = urdu_letters();
  // Skewed letter choice gives a long-tailed ligature frequency distribution.
  std::vector<double> weights;
  for (std::size_t i = 0; i < letters.size(); ++i) weights.push_back(1.0 / double(1 + i % 11));
  std::discrete_distribution<std::size_t> letter(weights.begin(), weights.end());
  std::uniform_int_distribution<int> word_len(1, 7), words_per_line(3, 12);
  std::string out;
  for (int l = 0; l < lines; ++l) {
    const int words = words_per_line(rng);
    for (int w = 0; w < words; ++w) {
      if (w) out += ' ';
      const int n = word_len(rng);
      for (int i = 0; i < n; ++i) out += encode_utf8(std::u32string(1, letters[letter(rng)]));
    }
    out += '\n';
  }
  return out;
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!f) throw std::runtime_error("cannot write " + path.string());
}

std::vector<std::filesystem::path> write_synthetic_fonts(const std::filesystem::path& dir, int count) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (int v = 0; v < count; ++v) {
    char name[32];
    std::snprintf(name, sizeof name, "fixture_%02d.ttf", v);
    paths.push_back(dir / name);
    write_bytes(paths.back(), build_ttf(synthetic_urdu_font_spec(v)));
  }
  return paths;
}

}  // namespace qaida::testing
