#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "qaida/dataset.hpp"
#include "qaida/error.hpp"
#include "qaida/png.hpp"
#include "tree.hpp"

using namespace qaida;
using namespace qaida::testing;
namespace fs = std::filesystem;

namespace {

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

std::vector<int> iota_ids(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

std::array<int, 3> counts(const ImageSplit& s) {
  std::array<int, 3> c{};
  for (Split x : s.assignment) ++c[int(x)];
  return c;
}

std::vector<ImageKey> one_class(int n, int class_id = 0) {
  std::vector<ImageKey> keys;
  for (int f = 0; f < n; ++f) keys.push_back({class_id, f});
  return keys;
}

std::vector<FontRecord> fixture_fonts(int n, int lacking = -1) {
  std::vector<FontRecord> fonts;
  for (int v = 0; v < n; ++v) {
    const std::vector<char32_t> missing = v == lacking ? std::vector<char32_t>{0xFEAD} : std::vector<char32_t>{};
    fonts.push_back(load_font_bytes(build_ttf(synthetic_urdu_font_spec(v, missing)), v, "fixture.ttf"));
  }
  return fonts;
}

ClassMap fixture_classes(int n) { return easiest_n(ingest_text(synthetic_corpus(40, 3)), n); }

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  for (const auto& l : lines) out << l << "\n";
}

bool has_violation(const VerifyReport& r, const std::string& needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

GenerateOptions small_options(int workers = 1) {
  GenerateOptions o;
  o.seed = 42;
  o.workers = workers;
  o.raster.canvas_px = 48;
  return o;
}

}  // namespace

TEST_CASE("split_fonts: sizes follow round(fraction × N)") {
  const auto four = split_fonts(iota_ids(4), 0.25, 1);
  CHECK(four.seen.size() == 3);
  CHECK(four.unseen.size() == 1);
  const auto full = split_fonts(iota_ids(256), 0.25, 1);
  CHECK(full.unseen.size() == 64);
  CHECK(full.seen.size() == 192);
  const auto explicit_count = split_fonts(iota_ids(256), 56.0 / 256, 1);
  CHECK(explicit_count.unseen.size() == 56);
  CHECK(explicit_count.seen.size() == 200);
  for (int n = 2; n <= 60; ++n) {
    for (double f : {0.1, 0.25, 0.5, 0.75}) {
      const long k = std::lround(f * n);
      if (k == 0 || k == n) continue;
      const auto s = split_fonts(iota_ids(n), f, 9);
      CHECK(long(s.unseen.size()) == k);
      std::set<int> all(s.seen.begin(), s.seen.end());
      for (int u : s.unseen) CHECK(all.insert(u).second);
      CHECK(all.size() == std::size_t(n));
    }
  }
}

TEST_CASE("split_fonts: deterministic, seed-sensitive, order-independent") {
  const auto ids = iota_ids(40);
  const auto a = split_fonts(ids, 0.25, 7);
  CHECK(split_fonts(ids, 0.25, 7).unseen == a.unseen);
  CHECK(split_fonts(ids, 0.25, 8).unseen != a.unseen);
  auto shuffled = ids;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(3));
  CHECK(split_fonts(shuffled, 0.25, 7).unseen == a.unseen);
  CHECK(std::is_sorted(a.seen.begin(), a.seen.end()));
}

TEST_CASE("split_fonts: errors") {
  CHECK(error_of([] { split_fonts(iota_ids(1), 0.25, 0); }) == Errc::TooFewFonts);
  CHECK(error_of([] { split_fonts(iota_ids(2), 0.1, 0); }) == Errc::TooFewFonts);
  CHECK(error_of([] { split_fonts(iota_ids(2), 0.9, 0); }) == Errc::TooFewFonts);
  CHECK(error_of([] { split_fonts(iota_ids(8), 0.0, 0); }) == Errc::InvalidArgument);
  CHECK(error_of([] { split_fonts(iota_ids(8), 1.0, 0); }) == Errc::InvalidArgument);
  CHECK(error_of([] { split_fonts(std::vector<int>{1, 1, 2}, 0.5, 0); }) == Errc::InvalidArgument);
}

TEST_CASE("split_images: worked sizes") {
  const SplitRatios r;
  CHECK(counts(split_images(one_class(200), r, 1)) == std::array<int, 3>{160, 20, 20});
  CHECK(counts(split_images(one_class(10), r, 1)) == std::array<int, 3>{8, 1, 1});
  CHECK(counts(split_images(one_class(3), r, 1)) == std::array<int, 3>{1, 1, 1});
  CHECK(counts(split_images(one_class(5), r, 1)) == std::array<int, 3>{3, 1, 1});
  const ImageSplit two = split_images(one_class(2, 7), r, 1);
  CHECK(counts(two) == std::array<int, 3>{2, 0, 0});
  CHECK(two.undersized_classes == std::vector<int>{7});
}

TEST_CASE("split_images: per-class counts within one record of the exact ratios") {
  for (const SplitRatios& r : {SplitRatios{80, 10, 10}, SplitRatios{70, 20, 10}, SplitRatios{60, 20, 20}}) {
    for (int n = 3; n <= 400; ++n) {
      const auto c = counts(split_images(one_class(n), r, std::uint64_t(n)));
      CAPTURE(n);
      CHECK(c[0] + c[1] + c[2] == n);
      CHECK(c[1] >= 1);
      CHECK(c[2] >= 1);
      if (n >= 5) {
        CHECK(std::abs(c[0] - n * r.train / 100.0) <= 1.0 + 1e-9);
        CHECK(std::abs(c[1] - n * r.val / 100.0) <= 1.0 + 1e-9);
        CHECK(std::abs(c[2] - n * r.test / 100.0) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("split_images: stratified per class and independent of record order") {
  std::vector<ImageKey> keys;
  for (int c = 0; c < 30; ++c) {
    for (int f = 0; f < 12; ++f) keys.push_back({c, f});
  }
  const ImageSplit base = split_images(keys, SplitRatios{}, 5);
  std::map<std::pair<int, int>, Split> by_key;
  for (std::size_t i = 0; i < keys.size(); ++i) by_key[{keys[i].class_id, keys[i].font_id}] = base.assignment[i];
  auto shuffled = keys;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(1));
  const ImageSplit again = split_images(shuffled, SplitRatios{}, 5);
  for (std::size_t i = 0; i < shuffled.size(); ++i) {
    CHECK(again.assignment[i] == by_key[{shuffled[i].class_id, shuffled[i].font_id}]);
  }
  const ImageSplit other = split_images(keys, SplitRatios{}, 6);
  CHECK(other.assignment != base.assignment);
}

TEST_CASE("split_images: zero ratios") {
  CHECK(counts(split_images(one_class(20), SplitRatios{100, 0, 0}, 1)) == std::array<int, 3>{20, 0, 0});
  CHECK(counts(split_images(one_class(20), SplitRatios{0, 50, 50}, 1)) == std::array<int, 3>{0, 10, 10});
}

TEST_CASE("SplitRatios parsing") {
  const SplitRatios r = SplitRatios::parse("70:20:10");
  CHECK(r.train == 70);
  CHECK(r.val == 20);
  CHECK(r.test == 10);
  CHECK(r.str() == "70:20:10");
  for (const char* bad : {"80:10:9", "80:10", "a:b:c", "80:10:10:0", "", "-10:100:10", "80::20"}) {
    CAPTURE(bad);
    CHECK(error_of([&] { SplitRatios::parse(bad); }) == Errc::InvalidArgument);
  }
}

TEST_CASE("names round trip") {
  for (Split s : {Split::Train, Split::Val, Split::Test, Split::Unseen}) CHECK(parse_split(split_name(s)) == s);
  for (Partition p : {Partition::Seen, Partition::Unseen}) CHECK(parse_partition(partition_name(p)) == p);
  CHECK(record_path(12, 3, Split::Unseen) == "unseen/00012/003.png");
}

TEST_CASE("generate: images, tables and a consistent manifest") {
  TempDir dir("generate");
  const auto fonts = fixture_fonts(8, 5);
  const ClassMap classes = fixture_classes(12);
  REQUIRE(classes.size() == 12);
  const GenerateResult res = generate(fonts, classes, small_options(), dir.path());
  const DatasetManifest& m = res.manifest;

  // Font 5 lacks the isolated reh, so it skips exactly the classes using it.
  REQUIRE_FALSE(res.skipped.empty());
  std::set<int> skipped_classes;
  for (const auto& s : res.skipped) {
    CHECK(s.font_id == 5);
    CHECK(s.reason.find("U+FEAD") != std::string::npos);
    skipped_classes.insert(s.class_id);
  }
  CHECK(m.records.size() + res.skipped.size() == 8 * 12);
  for (const auto& r : m.records) {
    CHECK(fs::is_regular_file(dir.path() / r.path));
    CHECK_FALSE((r.font_id == 5 && skipped_classes.count(r.class_id)));
  }
  CHECK(m.font_table.size() == 8);
  int unseen = 0;
  for (const auto& f : m.font_table) unseen += f.partition == Partition::Unseen;
  CHECK(unseen == 2);
  CHECK(std::is_sorted(m.records.begin(), m.records.end(), [](const ImageRecord& a, const ImageRecord& b) {
    return std::pair(a.class_id, a.font_id) < std::pair(b.class_id, b.font_id);
  }));
  const RasterImage img = read_png(dir.path() / m.records[0].path);
  CHECK(img.width == 48);
  CHECK(fs::exists(dir / "fonts.jsonl"));
  CHECK(fs::exists(dir / "ligatures.jsonl"));
  CHECK(lines_of(dir / "skipped.jsonl").size() == res.skipped.size());

  const VerifyReport v = verify(dir.path());
  CHECK(v.ok);
  CHECK(v.records_checked == m.records.size());
  for (const auto& msg : v.violations) MESSAGE(msg);

  const DatasetManifest back = read_manifest(dir.path());
  CHECK(back.records == m.records);
  CHECK(back.config_digest == m.config_digest);
  CHECK(back.config == m.config);
  CHECK(back.class_table.size() == 12);
}

TEST_CASE("generate: output tree does not depend on the worker count") {
  TempDir a("workers_a"), b("workers_b");
  const auto fonts = fixture_fonts(6);
  const ClassMap classes = fixture_classes(10);
  generate(fonts, classes, small_options(1), a.path());
  generate(fonts, classes, small_options(4), b.path());
  CHECK(snapshot_tree(a.path()) == snapshot_tree(b.path()));
  // Re-running into a populated directory reproduces it too.
  generate(fonts, classes, small_options(3), a.path());
  CHECK(snapshot_tree(a.path()) == snapshot_tree(b.path()));
}

TEST_CASE("generate: downscaled and binarized variants") {
  TempDir dir("variants");
  const auto fonts = fixture_fonts(4);
  GenerateOptions o = small_options(2);
  o.downscale = true;
  o.binarize = true;
  const auto res = generate(fonts, fixture_classes(5), o, dir.path());
  CHECK(res.manifest.image_px == 24);
  CHECK(res.manifest.binarized);
  for (const auto& r : res.manifest.records) {
    const RasterImage img = read_png(dir.path() / r.path);
    CHECK(img.width == 24);
    CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](auto p) { return p == 0 || p == 255; }));
  }
  CHECK(verify(dir.path()).ok);
}

TEST_CASE("generate: 80 px images are the 2x downscale of the 160 px render") {
  TempDir big("px160"), small("px80");
  const auto fonts = fixture_fonts(4);
  const ClassMap classes = fixture_classes(3);
  GenerateOptions o;
  o.seed = 1;
  generate(fonts, classes, o, big.path());
  o.downscale = true;
  const auto res = generate(fonts, classes, o, small.path());
  for (const auto& r : res.manifest.records) {
    CHECK(read_png(small.path() / r.path) == downscale_2x(read_png(big.path() / r.path)));
  }
}

TEST_CASE("generate: errors") {
  TempDir dir("gen_errors");
  const auto fonts = fixture_fonts(4);
  CHECK(error_of([&] { generate({}, fixture_classes(3), small_options(), dir.path()); }) == Errc::AllPairsSkipped);
  std::vector<FontRecord> bare = {load_font_bytes(build_ttf(minimal_font_spec()), 0),
                                  load_font_bytes(build_ttf(minimal_font_spec()), 1)};
  CHECK(error_of([&] { generate(bare, fixture_classes(3), small_options(), dir.path()); }) == Errc::AllPairsSkipped);
  std::ofstream(dir / "file") << "x";
  CHECK(error_of([&] { generate(fonts, fixture_classes(3), small_options(), dir / "file"); }) == Errc::IoFailure);
  GenerateOptions odd = small_options();
  odd.raster.canvas_px = 47;
  odd.downscale = true;
  CHECK(error_of([&] { generate(fonts, fixture_classes(3), odd, dir.path()); }) == Errc::OddDimensions);
}

TEST_CASE("manifest schema as consumed downstream") {
  TempDir dir("schema");
  const auto fonts = fixture_fonts(4);
  generate(fonts, fixture_classes(4), small_options(), dir.path());
  const auto lines = lines_of(dir / "manifest.jsonl");
  REQUIRE(lines.size() >= 2);
  const auto header = nlohmann::json::parse(lines[0]);
  for (const char* key : {"format", "seed", "config_digest", "image_px", "binarized", "ordering", "tie_rule", "num_classes",
                          "config", "fonts", "undersized_classes"}) {
    CAPTURE(key);
    CHECK(header.contains(key));
  }
  CHECK(header["config"]["ratios"] == "80:10:10");
  CHECK(header["config"]["font_holdout"] == 0.25);
  const std::set<std::string> splits = {"train", "val", "test", "unseen"};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto rec = nlohmann::json::parse(lines[i]);
    CHECK(rec.size() == 4);
    CHECK(rec.at("path").is_string());
    CHECK(rec.at("class_id").is_number_integer());
    CHECK(rec.at("font_id").is_number_integer());
    CHECK(splits.count(rec.at("split").get<std::string>()));
  }
  const auto ligs = lines_of(dir / "ligatures.jsonl");
  const auto lig_header = nlohmann::json::parse(ligs[0]);
  CHECK(lig_header.contains("ordering"));
  CHECK(lig_header.contains("tie_rule"));
  const auto first = nlohmann::json::parse(ligs[1]);
  CHECK(first.at("class_id") == 0);
  CHECK(first.at("codepoints")[0].get<std::string>().rfind("U+", 0) == 0);
  const auto font_line = nlohmann::json::parse(lines_of(dir / "fonts.jsonl")[0]);
  CHECK(font_line.size() == 6);
  CHECK(font_line.at("kept") == true);
}

TEST_CASE("verify: mutations are detected") {
  TempDir dir("verify");
  const auto fonts = fixture_fonts(8);
  const DatasetManifest m = generate(fonts, fixture_classes(6), small_options(), dir.path()).manifest;
  REQUIRE(verify(dir.path()).ok);
  const auto pristine = lines_of(dir / "manifest.jsonl");

  SUBCASE("deleted image") {
    fs::remove(dir.path() / m.records[3].path);
    const auto r = verify(dir.path());
    CHECK_FALSE(r.ok);
    CHECK(has_violation(r, m.records[3].path));
  }
  SUBCASE("unseen font moved into train") {
    std::size_t i = 0;
    while (m.records[i].split != Split::Unseen) ++i;
    auto rec = nlohmann::json::parse(pristine[i + 1]);
    const std::string new_path = record_path(rec["class_id"], rec["font_id"], Split::Train);
    fs::create_directories((dir.path() / new_path).parent_path());
    fs::rename(dir.path() / rec["path"].get<std::string>(), dir.path() / new_path);
    rec["split"] = "train";
    rec["path"] = new_path;
    auto lines = pristine;
    lines[i + 1] = rec.dump();
    write_lines(dir / "manifest.jsonl", lines);
    const auto r = verify(dir.path());
    CHECK_FALSE(r.ok);
    CHECK(has_violation(r, "font-disjointness"));
  }
  SUBCASE("every field of every record") {
    for (std::size_t i = 0; i < m.records.size(); ++i) {
      for (const char* field : {"path", "class_id", "font_id", "split"}) {
        auto rec = nlohmann::ordered_json::parse(pristine[i + 1]);
        if (std::string(field) == "path") rec[field] = rec[field].get<std::string>() + "x";
        if (std::string(field) == "class_id") rec[field] = (rec[field].get<int>() + 1) % 6;
        if (std::string(field) == "font_id") rec[field] = (rec[field].get<int>() + 1) % 9;
        if (std::string(field) == "split") {
          rec[field] = rec[field] == "train" ? "val" : "train";
        }
        auto lines = pristine;
        lines[i + 1] = rec.dump();
        write_lines(dir / "manifest.jsonl", lines);
        CAPTURE(i);
        CAPTURE(field);
        CHECK_FALSE(verify(dir.path()).ok);
      }
    }
    write_lines(dir / "manifest.jsonl", pristine);
    CHECK(verify(dir.path()).ok);
  }
  SUBCASE("record moved consistently to another split") {
    std::size_t i = 0;
    while (m.records[i].split != Split::Train) ++i;
    auto rec = nlohmann::ordered_json::parse(pristine[i + 1]);
    const std::string new_path = record_path(rec["class_id"], rec["font_id"], Split::Test);
    fs::create_directories((dir.path() / new_path).parent_path());
    fs::rename(dir.path() / rec["path"].get<std::string>(), dir.path() / new_path);
    rec["split"] = "test";
    rec["path"] = new_path;
    auto lines = pristine;
    lines[i + 1] = rec.dump();
    write_lines(dir / "manifest.jsonl", lines);
    const auto r = verify(dir.path());
    CHECK_FALSE(r.ok);
    CHECK(has_violation(r, "seeded assignment"));
  }
  SUBCASE("dropped and duplicated records") {
    auto lines = pristine;
    lines.erase(lines.begin() + 2);
    write_lines(dir / "manifest.jsonl", lines);
    CHECK(has_violation(verify(dir.path()), "not referenced"));
    lines = pristine;
    lines.insert(lines.begin() + 2, pristine[1]);
    write_lines(dir / "manifest.jsonl", lines);
    CHECK(has_violation(verify(dir.path()), "duplicate"));
  }
  SUBCASE("config edited without updating the digest") {
    auto header = nlohmann::ordered_json::parse(pristine[0]);
    header["config"]["supersample"] = 8;
    auto lines = pristine;
    lines[0] = header.dump();
    write_lines(dir / "manifest.jsonl", lines);
    CHECK(has_violation(verify(dir.path()), "config_digest"));
  }
  SUBCASE("wrong image size and corrupt image") {
    write_png(dir.path() / m.records[0].path, RasterImage(10, 10, 255));
    std::ofstream(dir.path() / m.records[1].path, std::ios::binary) << "not a png";
    const auto r = verify(dir.path());
    CHECK(has_violation(r, "expected 48"));
    CHECK(has_violation(r, "not a decodable PNG"));
  }
  SUBCASE("class table missing") {
    fs::remove(dir / "ligatures.jsonl");
    CHECK(has_violation(verify(dir.path()), "ligatures.jsonl missing"));
  }
  SUBCASE("stray file in a split directory") {
    std::ofstream(dir.path() / "train" / "stray.png") << "x";
    CHECK(has_violation(verify(dir.path()), "train/stray.png"));
  }
  SUBCASE("manifest missing") {
    fs::remove(dir / "manifest.jsonl");
    CHECK(error_of([&] { verify(dir.path()); }) == Errc::ManifestMissing);
    CHECK(error_of([&] { read_manifest(dir.path()); }) == Errc::ManifestMissing);
  }
}

TEST_CASE("verify: gray pixels in a binarized set") {
  TempDir dir("verify_bin");
  GenerateOptions o = small_options();
  o.binarize = true;
  const auto m = generate(fixture_fonts(4), fixture_classes(3), o, dir.path()).manifest;
  REQUIRE(verify(dir.path()).ok);
  write_png(dir.path() / m.records[0].path, RasterImage(48, 48, 128));
  CHECK(has_violation(verify(dir.path()), "gray pixels"));
}

TEST_CASE("resplit moves images and matches a fresh generate with the new parameters") {
  TempDir a("resplit_a"), b("resplit_b");
  const auto fonts = fixture_fonts(8);
  const ClassMap classes = fixture_classes(6);
  generate(fonts, classes, small_options(), a.path());
  const DatasetManifest moved = resplit(a.path(), 0.5, SplitRatios{60, 20, 20}, 99);
  CHECK(verify(a.path()).ok);
  GenerateOptions o = small_options();
  o.font_holdout = 0.5;
  o.ratios = SplitRatios{60, 20, 20};
  o.seed = 99;
  const DatasetManifest fresh = generate(fonts, classes, o, b.path()).manifest;
  CHECK(moved.records == fresh.records);
  CHECK(moved.config == fresh.config);
  CHECK(snapshot_tree(a.path()) == snapshot_tree(b.path()));
}

TEST_CASE("config digest is stable and sensitive") {
  nlohmann::ordered_json a;
  a["x"] = 1;
  a["y"] = "z";
  nlohmann::ordered_json b = a;
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a).size() == 16);
  b["x"] = 2;
  CHECK(config_digest(a) != config_digest(b));
}
