#include "qaida/font.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>

#include <json.hpp>

#include "qaida/error.hpp"
#include "text_io.hpp"

namespace qaida {

namespace detail {

struct FontData {
  std::vector<std::uint8_t> bytes;
  std::uint32_t glyf_offset = 0;
  std::uint32_t glyf_length = 0;
  std::vector<std::uint32_t> loca;  // glyph_count + 1 entries, relative to glyf
  std::vector<std::uint16_t> advances;
  std::vector<std::pair<char32_t, std::uint16_t>> cmap;  // sorted by codepoint
};

}  // namespace detail

namespace {

constexpr std::uint32_t tag(const char (&s)[5]) {
  return (std::uint32_t(std::uint8_t(s[0])) << 24) | (std::uint32_t(std::uint8_t(s[1])) << 16) |
         (std::uint32_t(std::uint8_t(s[2])) << 8) | std::uint32_t(std::uint8_t(s[3]));
}

// Bounds-checked big-endian reads over a byte range. Out-of-range access is
// reported with the error code supplied at construction.
class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, Errc on_overrun) : bytes_(bytes), errc_(on_overrun) {}

  std::size_t size() const { return bytes_.size(); }

  std::uint8_t u8(std::size_t off) const {
    need(off, 1);
    return bytes_[off];
  }
  std::int8_t i8(std::size_t off) const { return static_cast<std::int8_t>(u8(off)); }
  std::uint16_t u16(std::size_t off) const {
    need(off, 2);
    return static_cast<std::uint16_t>((bytes_[off] << 8) | bytes_[off + 1]);
  }
  std::int16_t i16(std::size_t off) const { return static_cast<std::int16_t>(u16(off)); }
  std::uint32_t u32(std::size_t off) const {
    need(off, 4);
    return (std::uint32_t(bytes_[off]) << 24) | (std::uint32_t(bytes_[off + 1]) << 16) |
           (std::uint32_t(bytes_[off + 2]) << 8) | std::uint32_t(bytes_[off + 3]);
  }
  double f2dot14(std::size_t off) const { return i16(off) / 16384.0; }

  Reader sub(std::size_t off, std::size_t len) const {
    need(off, len);
    return Reader(bytes_.subspan(off, len), errc_);
  }

  void need(std::size_t off, std::size_t len) const {
    if (off > bytes_.size() || len > bytes_.size() - off) {
      throw Error(errc_, "read of " + std::to_string(len) + " bytes at offset " + std::to_string(off) +
                             " past end of " + std::to_string(bytes_.size()) + "-byte range");
    }
  }

 private:
  std::span<const std::uint8_t> bytes_;
  Errc errc_;
};

struct TableRef {
  std::uint32_t offset = 0;
  std::uint32_t length = 0;
};

using TableDirectory = std::map<std::uint32_t, TableRef>;

TableDirectory read_directory(const Reader& file) {
  if (file.size() < 12) throw Error(Errc::NotAFont, "file shorter than an sfnt header");
  const std::uint32_t version = file.u32(0);
  if (version != 0x00010000 && version != tag("true") && version != tag("OTTO")) {
    throw Error(Errc::NotAFont, "unrecognized sfnt version");
  }
  const std::uint16_t num_tables = file.u16(4);
  if (num_tables == 0 || 12 + std::size_t(num_tables) * 16 > file.size()) {
    throw Error(Errc::NotAFont, "table directory does not fit in file");
  }
  TableDirectory dir;
  for (std::size_t i = 0; i < num_tables; ++i) {
    const std::size_t rec = 12 + i * 16;
    TableRef ref{file.u32(rec + 8), file.u32(rec + 12)};
    if (std::size_t(ref.offset) + ref.length > file.size()) {
      throw Error(Errc::MalformedTable, "table record points past end of file");
    }
    dir.emplace(file.u32(rec), ref);
  }
  return dir;
}

Reader table(const Reader& file, const TableDirectory& dir, std::uint32_t t, const char* name) {
  auto it = dir.find(t);
  if (it == dir.end()) throw Error(Errc::MissingTable, std::string("no '") + name + "' table");
  return file.sub(it->second.offset, it->second.length);
}

void parse_cmap_format4(const Reader& sub, int glyph_count, std::vector<std::pair<char32_t, std::uint16_t>>& out) {
  const std::size_t length = sub.u16(2);
  const Reader st = sub.sub(0, std::min<std::size_t>(length, sub.size()));
  const std::size_t seg_count = st.u16(6) / 2;
  const std::size_t ends = 14;
  const std::size_t starts = ends + seg_count * 2 + 2;
  const std::size_t deltas = starts + seg_count * 2;
  const std::size_t ranges = deltas + seg_count * 2;
  st.need(ranges, seg_count * 2);
  for (std::size_t s = 0; s < seg_count; ++s) {
    const std::uint32_t end = st.u16(ends + s * 2);
    const std::uint32_t start = st.u16(starts + s * 2);
    const std::uint16_t delta = st.u16(deltas + s * 2);
    const std::uint16_t range_offset = st.u16(ranges + s * 2);
    if (start > end) throw Error(Errc::MalformedTable, "cmap format 4 segment with start > end");
    for (std::uint32_t c = start; c <= end; ++c) {
      if (c == 0xFFFF) break;
      std::uint16_t glyph = 0;
      if (range_offset == 0) {
        glyph = static_cast<std::uint16_t>(c + delta);
      } else {
        const std::size_t addr = ranges + s * 2 + range_offset + 2 * (c - start);
        glyph = st.u16(addr);
        if (glyph != 0) glyph = static_cast<std::uint16_t>(glyph + delta);
      }
      if (glyph != 0 && glyph < glyph_count) out.emplace_back(static_cast<char32_t>(c), glyph);
    }
  }
}

void parse_cmap_format12(const Reader& sub, int glyph_count, std::vector<std::pair<char32_t, std::uint16_t>>& out) {
  const std::uint32_t groups = sub.u32(12);
  sub.need(16, std::size_t(groups) * 12);
  for (std::uint32_t g = 0; g < groups; ++g) {
    const std::size_t rec = 16 + std::size_t(g) * 12;
    const std::uint32_t start = sub.u32(rec);
    const std::uint32_t end = sub.u32(rec + 4);
    const std::uint32_t first_glyph = sub.u32(rec + 8);
    if (start > end || end > 0x10FFFF) throw Error(Errc::MalformedTable, "cmap format 12 group out of range");
    for (std::uint32_t c = start; c <= end; ++c) {
      const std::uint32_t glyph = first_glyph + (c - start);
      if (glyph != 0 && glyph < std::uint32_t(glyph_count)) {
        out.emplace_back(static_cast<char32_t>(c), static_cast<std::uint16_t>(glyph));
      }
    }
  }
}

std::vector<std::pair<char32_t, std::uint16_t>> parse_cmap(const Reader& cmap, int glyph_count) {
  const std::uint16_t num = cmap.u16(2);
  // Best Unicode subtable per format: full-repertoire format 12 wins over BMP format 4.
  std::optional<std::uint32_t> fmt12;
  std::optional<std::uint32_t> fmt4;
  for (std::size_t i = 0; i < num; ++i) {
    const std::size_t rec = 4 + i * 8;
    const std::uint16_t platform = cmap.u16(rec);
    const std::uint16_t encoding = cmap.u16(rec + 2);
    const std::uint32_t offset = cmap.u32(rec + 4);
    const bool unicode = platform == 0 || (platform == 3 && (encoding == 1 || encoding == 10));
    if (!unicode) continue;
    const std::uint16_t format = cmap.u16(offset);
    if (format == 12 && !fmt12) fmt12 = offset;
    if (format == 4 && !fmt4) fmt4 = offset;
  }
  std::vector<std::pair<char32_t, std::uint16_t>> out;
  if (fmt12) {
    parse_cmap_format12(cmap.sub(*fmt12, cmap.size() - *fmt12), glyph_count, out);
  } else if (fmt4) {
    parse_cmap_format4(cmap.sub(*fmt4, cmap.size() - *fmt4), glyph_count, out);
  } else {
    throw Error(Errc::MissingTable, "no Unicode cmap subtable in format 4 or 12");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
            out.end());
  return out;
}

std::string decode_utf16be(const Reader& r, std::size_t off, std::size_t len) {
  std::u32string cps;
  for (std::size_t i = 0; i + 1 < len; i += 2) {
    char32_t u = r.u16(off + i);
    if (u >= 0xD800 && u < 0xDC00 && i + 3 < len) {
      const char32_t lo = r.u16(off + i + 2);
      if (lo >= 0xDC00 && lo < 0xE000) {
        u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
        i += 2;
      }
    }
    cps.push_back(u);
  }
  return encode_utf8(cps);
}

std::string parse_family_name(const Reader& file, const TableDirectory& dir) {
  auto it = dir.find(tag("name"));
  if (it == dir.end()) return {};
  try {
    const Reader name = file.sub(it->second.offset, it->second.length);
    const std::uint16_t count = name.u16(2);
    const std::uint16_t storage = name.u16(4);
    std::string mac;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t rec = 6 + i * 12;
      const std::uint16_t platform = name.u16(rec);
      const std::uint16_t name_id = name.u16(rec + 6);
      const std::uint16_t len = name.u16(rec + 8);
      const std::uint16_t off = name.u16(rec + 10);
      if (name_id != 1) continue;
      if (platform == 3 || platform == 0) return decode_utf16be(name, std::size_t(storage) + off, len);
      if (platform == 1 && mac.empty()) {
        for (std::size_t k = 0; k < len; ++k) mac.push_back(static_cast<char>(name.u8(std::size_t(storage) + off + k) & 0x7F));
      }
    }
    return mac;
  } catch (const Error&) {
    return {};  // the name table is informational only
  }
}

}  // namespace

bool FontRecord::covers(char32_t cp) const { return std::binary_search(coverage_.begin(), coverage_.end(), cp); }

std::uint16_t FontRecord::glyph_index(char32_t cp) const {
  const auto& cmap = data_->cmap;
  auto it = std::lower_bound(cmap.begin(), cmap.end(), cp, [](const auto& e, char32_t c) { return e.first < c; });
  return (it != cmap.end() && it->first == cp) ? it->second : 0;
}

FontRecord FontRecord::with_id(int font_id) const {
  FontRecord copy = *this;
  copy.font_id_ = font_id;
  return copy;
}

FontRecord load_font_bytes(std::vector<std::uint8_t> bytes, int font_id, std::string file_path) {
  auto data = std::make_shared<detail::FontData>();
  data->bytes = std::move(bytes);
  const Reader file(data->bytes, Errc::MalformedTable);
  const TableDirectory dir = read_directory(file);

  const Reader head = table(file, dir, tag("head"), "head");
  const Reader hhea = table(file, dir, tag("hhea"), "hhea");
  const Reader maxp = table(file, dir, tag("maxp"), "maxp");
  const Reader cmap = table(file, dir, tag("cmap"), "cmap");
  const Reader hmtx = table(file, dir, tag("hmtx"), "hmtx");
  const Reader loca = table(file, dir, tag("loca"), "loca");
  (void)table(file, dir, tag("glyf"), "glyf");

  FontRecord rec;
  rec.font_id_ = font_id;
  rec.file_path_ = std::move(file_path);
  rec.units_per_em_ = head.u16(18);
  if (rec.units_per_em_ <= 0) throw Error(Errc::MalformedTable, "head.unitsPerEm is zero");
  const int loca_format = head.i16(50);
  rec.ascender_ = hhea.i16(4);
  rec.descender_ = hhea.i16(6);
  const int num_hmetrics = hhea.u16(34);
  rec.glyph_count_ = maxp.u16(4);
  if (rec.glyph_count_ < 1) throw Error(Errc::MalformedTable, "maxp.numGlyphs is zero");
  if (num_hmetrics < 1 || num_hmetrics > rec.glyph_count_) {
    throw Error(Errc::MalformedTable, "hhea.numberOfHMetrics out of range");
  }

  const TableRef glyf = dir.at(tag("glyf"));
  data->glyf_offset = glyf.offset;
  data->glyf_length = glyf.length;
  const std::size_t entries = std::size_t(rec.glyph_count_) + 1;
  data->loca.resize(entries);
  if (loca_format != 0 && loca_format != 1) throw Error(Errc::MalformedTable, "unknown indexToLocFormat");
  loca.need(0, entries * (loca_format == 0 ? 2 : 4));
  for (std::size_t g = 0; g < entries; ++g) {
    data->loca[g] = loca_format == 0 ? std::uint32_t(loca.u16(g * 2)) * 2 : loca.u32(g * 4);
    if (data->loca[g] > glyf.length) throw Error(Errc::MalformedTable, "loca entry past end of glyf");
    if (g > 0 && data->loca[g] < data->loca[g - 1]) throw Error(Errc::MalformedTable, "loca offsets decrease");
  }

  hmtx.need(0, std::size_t(num_hmetrics) * 4 + std::size_t(rec.glyph_count_ - num_hmetrics) * 2);
  data->advances.resize(rec.glyph_count_);
  for (int g = 0; g < rec.glyph_count_; ++g) {
    data->advances[g] = hmtx.u16(std::size_t(std::min(g, num_hmetrics - 1)) * 4);
  }

  data->cmap = parse_cmap(cmap, rec.glyph_count_);
  rec.coverage_.reserve(data->cmap.size());
  for (const auto& [cp, glyph] : data->cmap) rec.coverage_.push_back(cp);

  rec.family_name_ = parse_family_name(file, dir);
  if (rec.family_name_.empty()) rec.family_name_ = std::filesystem::path(rec.file_path_).stem().string();
  rec.data_ = std::move(data);
  return rec;
}

FontRecord load_font(const std::filesystem::path& path, int font_id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoFailure, "read failed for " + path.string());
  return load_font_bytes(std::move(bytes), font_id, path.string());
}

namespace {

constexpr std::uint8_t kOnCurve = 0x01;
constexpr std::uint8_t kXShort = 0x02;
constexpr std::uint8_t kYShort = 0x04;
constexpr std::uint8_t kRepeat = 0x08;
constexpr std::uint8_t kXSame = 0x10;
constexpr std::uint8_t kYSame = 0x20;

constexpr std::uint16_t kArgWords = 0x0001;
constexpr std::uint16_t kArgsXY = 0x0002;
constexpr std::uint16_t kHaveScale = 0x0008;
constexpr std::uint16_t kMoreComponents = 0x0020;
constexpr std::uint16_t kHaveXYScale = 0x0040;
constexpr std::uint16_t kHave2x2 = 0x0080;

using Contours = std::vector<std::vector<OutlinePoint>>;

void parse_simple(const Reader& g, int num_contours, Contours& out) {
  std::vector<std::uint16_t> end_points(num_contours);
  for (int c = 0; c < num_contours; ++c) {
    end_points[c] = g.u16(10 + std::size_t(c) * 2);
    if (c > 0 && end_points[c] <= end_points[c - 1]) throw Error(Errc::MalformedGlyph, "contour end points not increasing");
  }
  const std::size_t num_points = std::size_t(end_points.back()) + 1;
  std::size_t pos = 10 + std::size_t(num_contours) * 2;
  const std::uint16_t instr_len = g.u16(pos);
  pos += 2 + instr_len;

  std::vector<std::uint8_t> flags;
  flags.reserve(num_points);
  while (flags.size() < num_points) {
    const std::uint8_t f = g.u8(pos++);
    flags.push_back(f);
    if (f & kRepeat) {
      const std::uint8_t n = g.u8(pos++);
      for (int k = 0; k < n && flags.size() < num_points; ++k) flags.push_back(f);
    }
  }

  std::vector<OutlinePoint> pts(num_points);
  int x = 0;
  for (std::size_t i = 0; i < num_points; ++i) {
    if (flags[i] & kXShort) {
      const int dx = g.u8(pos++);
      x += (flags[i] & kXSame) ? dx : -dx;
    } else if (!(flags[i] & kXSame)) {
      x += g.i16(pos);
      pos += 2;
    }
    pts[i].x = x;
    pts[i].on_curve = flags[i] & kOnCurve;
  }
  int y = 0;
  for (std::size_t i = 0; i < num_points; ++i) {
    if (flags[i] & kYShort) {
      const int dy = g.u8(pos++);
      y += (flags[i] & kYSame) ? dy : -dy;
    } else if (!(flags[i] & kYSame)) {
      y += g.i16(pos);
      pos += 2;
    }
    pts[i].y = y;
  }

  std::size_t first = 0;
  for (int c = 0; c < num_contours; ++c) {
    const std::size_t last = end_points[c];
    out.emplace_back(pts.begin() + first, pts.begin() + last + 1);
    first = last + 1;
  }
}

void collect(const FontRecord& font, const detail::FontData& data, std::uint16_t glyph_id, int depth, Contours& out);

void parse_composite(const FontRecord& font, const detail::FontData& data, const Reader& g, int depth, Contours& out) {
  std::size_t pos = 10;
  std::uint16_t flags = 0;
  do {
    flags = g.u16(pos);
    const std::uint16_t child = g.u16(pos + 2);
    pos += 4;
    int arg1 = 0;
    int arg2 = 0;
    if (flags & kArgWords) {
      arg1 = (flags & kArgsXY) ? int(g.i16(pos)) : int(g.u16(pos));
      arg2 = (flags & kArgsXY) ? int(g.i16(pos + 2)) : int(g.u16(pos + 2));
      pos += 4;
    } else {
      arg1 = (flags & kArgsXY) ? int(g.i8(pos)) : int(g.u8(pos));
      arg2 = (flags & kArgsXY) ? int(g.i8(pos + 1)) : int(g.u8(pos + 1));
      pos += 2;
    }
    double a = 1, b = 0, c = 0, d = 1;
    if (flags & kHaveScale) {
      a = d = g.f2dot14(pos);
      pos += 2;
    } else if (flags & kHaveXYScale) {
      a = g.f2dot14(pos);
      d = g.f2dot14(pos + 2);
      pos += 4;
    } else if (flags & kHave2x2) {
      a = g.f2dot14(pos);
      b = g.f2dot14(pos + 2);
      c = g.f2dot14(pos + 4);
      d = g.f2dot14(pos + 6);
      pos += 8;
    }

    Contours part;
    collect(font, data, child, depth + 1, part);
    for (auto& contour : part) {
      for (auto& p : contour) {
        const double px = p.x;
        p.x = a * px + c * p.y;
        p.y = b * px + d * p.y;
      }
    }
    double dx = 0;
    double dy = 0;
    if (flags & kArgsXY) {
      dx = arg1;
      dy = arg2;
    } else {
      // Point matching: align parent point arg1 with child point arg2.
      auto nth = [](const Contours& cs, int index) -> const OutlinePoint* {
        for (const auto& contour : cs) {
          if (index < int(contour.size())) return &contour[index];
          index -= int(contour.size());
        }
        return nullptr;
      };
      const OutlinePoint* parent = nth(out, arg1);
      const OutlinePoint* mine = nth(part, arg2);
      if (!parent || !mine) throw Error(Errc::MalformedGlyph, "composite anchor point index out of range");
      dx = parent->x - mine->x;
      dy = parent->y - mine->y;
    }
    for (auto& contour : part) {
      for (auto& p : contour) {
        p.x += dx;
        p.y += dy;
      }
      out.push_back(std::move(contour));
    }
  } while (flags & kMoreComponents);
}

void collect(const FontRecord& font, const detail::FontData& data, std::uint16_t glyph_id, int depth, Contours& out) {
  if (depth > kMaxCompositeDepth) throw Error(Errc::MalformedGlyph, "composite glyph nesting exceeds depth limit");
  if (glyph_id >= font.glyph_count()) throw Error(Errc::MalformedGlyph, "glyph id out of range");
  const std::uint32_t begin = data.loca[glyph_id];
  const std::uint32_t end = data.loca[glyph_id + 1];
  if (begin == end) return;
  const Reader g(std::span<const std::uint8_t>(data.bytes).subspan(data.glyf_offset + begin, end - begin),
                 Errc::MalformedGlyph);
  const int num_contours = g.i16(0);
  if (num_contours > 0) {
    parse_simple(g, num_contours, out);
  } else if (num_contours < 0) {
    parse_composite(font, data, g, depth, out);
  }
}

}  // namespace

GlyphOutline glyph_outline(const FontRecord& font, std::uint16_t glyph_id) {
  const auto& data = *font.data_;
  GlyphOutline outline;
  Contours contours;
  collect(font, data, glyph_id, 0, contours);
  for (auto& contour : contours) {
    // Single-point contours are anchors with no area.
    if (contour.size() >= 2) outline.contours.push_back(std::move(contour));
  }
  outline.advance_width = data.advances[glyph_id];
  bool first = true;
  for (const auto& contour : outline.contours) {
    for (const auto& p : contour) {
      if (first) {
        outline.bbox = {p.x, p.y, p.x, p.y};
        first = false;
      }
      outline.bbox.xmin = std::min(outline.bbox.xmin, p.x);
      outline.bbox.ymin = std::min(outline.bbox.ymin, p.y);
      outline.bbox.xmax = std::max(outline.bbox.xmax, p.x);
      outline.bbox.ymax = std::max(outline.bbox.ymax, p.y);
    }
  }
  return outline;
}

GlyphOutline glyph_for_codepoint(const FontRecord& font, char32_t cp) {
  const std::uint16_t glyph = font.glyph_index(cp);
  if (glyph == 0) throw Error(Errc::Unmapped, "codepoint " + format_codepoint(cp) + " not mapped by " + font.family_name());
  return glyph_outline(font, glyph);
}

FilterResult filter_fonts(std::span<const FontRecord> fonts, std::span<const char32_t> alphabet) {
  if (fonts.empty()) throw Error(Errc::InvalidArgument, "filter_fonts needs at least one font");
  if (alphabet.empty()) throw Error(Errc::InvalidArgument, "filter_fonts needs a non-empty alphabet");
  std::vector<char32_t> wanted(alphabet.begin(), alphabet.end());
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  std::vector<std::vector<char32_t>> signatures;
  signatures.reserve(fonts.size());
  std::map<std::vector<char32_t>, int> votes;
  for (const auto& f : fonts) {
    std::vector<char32_t> sig;
    std::set_intersection(f.coverage().begin(), f.coverage().end(), wanted.begin(), wanted.end(), std::back_inserter(sig));
    if (!sig.empty()) ++votes[sig];
    signatures.push_back(std::move(sig));
  }
  if (votes.empty()) throw Error(Errc::EmptyResult, "no font covers any codepoint of the alphabet");

  // std::map iterates in lexicographic order, so the first strict winner is
  // already the lexicographically smallest among equals.
  const std::vector<char32_t>* best = nullptr;
  int best_votes = 0;
  for (const auto& [sig, n] : votes) {
    if (!best || n > best_votes || (n == best_votes && sig.size() > best->size())) {
      best = &sig;
      best_votes = n;
    }
  }

  FilterResult result;
  result.canonical_set = *best;
  for (std::size_t i = 0; i < fonts.size(); ++i) {
    if (std::includes(signatures[i].begin(), signatures[i].end(), best->begin(), best->end())) {
      result.kept.push_back(fonts[i]);
    }
  }
  std::sort(result.kept.begin(), result.kept.end(),
            [](const FontRecord& a, const FontRecord& b) { return a.font_id() < b.font_id(); });
  return result;
}

FontListing listing_for(const FontRecord& font, bool kept) {
  return {font.font_id(), font.family_name(), font.file_path(), font.units_per_em(), int(font.coverage().size()), kept};
}

void write_fonts_jsonl(const std::filesystem::path& path, std::span<const FontListing> fonts) {
  std::string text;
  for (const auto& f : fonts) {
    nlohmann::ordered_json j;
    j["font_id"] = f.font_id;
    j["family"] = f.family;
    j["file"] = f.file;
    j["units_per_em"] = f.units_per_em;
    j["coverage_size"] = f.coverage_size;
    j["kept"] = f.kept;
    text += j.dump() + "\n";
  }
  write_text_file(path, text);
}

std::vector<FontListing> read_fonts_jsonl(const std::filesystem::path& path) {
  std::vector<FontListing> out;
  for_each_json_line(path, [&](const nlohmann::ordered_json& j) {
    FontListing f;
    f.font_id = j.at("font_id").get<int>();
    f.family = j.at("family").get<std::string>();
    f.file = j.at("file").get<std::string>();
    f.units_per_em = j.at("units_per_em").get<int>();
    f.coverage_size = j.at("coverage_size").get<int>();
    f.kept = j.at("kept").get<bool>();
    out.push_back(std::move(f));
  });
  return out;
}

}  // namespace qaida
