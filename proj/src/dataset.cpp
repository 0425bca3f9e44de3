#include "qaida/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "qaida/error.hpp"
#include "qaida/parallel.hpp"
#include "qaida/png.hpp"
#include "qaida/utf8.hpp"
#include "text_io.hpp"

namespace qaida {

namespace fs = std::filesystem;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, bound). std::uniform_int_distribution is not
// specified bit-for-bit, so datasets would differ between standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

template <class T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = draw_below(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

constexpr std::uint64_t kFontStream = 0x666f6e7473ull;    // "fonts"
constexpr std::uint64_t kImageStream = 0x696d61676573ull;  // "images"

nlohmann::ordered_json ratios_json(const SplitRatios& r) { return r.str(); }

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
    case Split::Unseen: return "unseen";
  }
  return "?";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  if (name == "unseen") return Split::Unseen;
  throw Error(Errc::InvalidArgument, "unknown split '" + std::string(name) + "'");
}

std::string_view partition_name(Partition p) { return p == Partition::Seen ? "seen" : "unseen"; }

Partition parse_partition(std::string_view name) {
  if (name == "seen") return Partition::Seen;
  if (name == "unseen") return Partition::Unseen;
  throw Error(Errc::InvalidArgument, "unknown partition '" + std::string(name) + "'");
}

std::string record_path(int class_id, int font_id, Split split) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s/%05d/%03d.png", std::string(split_name(split)).c_str(), class_id, font_id);
  return buf;
}

FontSplit split_fonts(std::span<const int> font_ids, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction > 0 && holdout_fraction < 1)) {
    throw Error(Errc::InvalidArgument, "font holdout fraction must be in (0,1)");
  }
  std::vector<int> ids(font_ids.begin(), font_ids.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw Error(Errc::InvalidArgument, "duplicate font id");
  if (ids.size() < 2) throw Error(Errc::TooFewFonts, "need at least two fonts, got " + std::to_string(ids.size()));
  const auto n_unseen = static_cast<std::size_t>(std::lround(holdout_fraction * double(ids.size())));
  if (n_unseen == 0 || n_unseen == ids.size()) {
    throw Error(Errc::TooFewFonts, "holdout " + std::to_string(holdout_fraction) + " of " + std::to_string(ids.size()) +
                                       " fonts leaves an empty partition");
  }
  seeded_shuffle(ids, splitmix64(seed ^ kFontStream));
  FontSplit out;
  out.unseen.assign(ids.begin(), ids.begin() + std::ptrdiff_t(n_unseen));
  out.seen.assign(ids.begin() + std::ptrdiff_t(n_unseen), ids.end());
  std::sort(out.unseen.begin(), out.unseen.end());
  std::sort(out.seen.begin(), out.seen.end());
  return out;
}

void SplitRatios::validate() const {
  if (train < 0 || val < 0 || test < 0 || train + val + test != 100) {
    throw Error(Errc::InvalidArgument, "split ratios must be non-negative and sum to 100, got " + str());
  }
}

SplitRatios SplitRatios::parse(std::string_view text) {
  SplitRatios r;
  int* parts[3] = {&r.train, &r.val, &r.test};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t colon = k < 2 ? text.find(':', pos) : text.size();
    if (colon == std::string_view::npos) throw Error(Errc::InvalidArgument, "ratios must look like 80:10:10");
    const std::string field(text.substr(pos, colon - pos));
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(Errc::InvalidArgument, "ratios must look like 80:10:10");
    }
    *parts[k] = std::stoi(field);
    pos = colon + 1;
  }
  r.validate();
  return r;
}

std::string SplitRatios::str() const {
  return std::to_string(train) + ":" + std::to_string(val) + ":" + std::to_string(test);
}

ImageSplit split_images(std::span<const ImageKey> records, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  ImageSplit out;
  out.assignment.assign(records.size(), Split::Train);

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < records.size(); ++i) by_class[records[i].class_id].push_back(i);

  for (auto& [class_id, idx] : by_class) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return records[a].font_id != records[b].font_id ? records[a].font_id < records[b].font_id : a < b;
    });
    const std::size_t n = idx.size();
    if (n < 3) {
      out.undersized_classes.push_back(class_id);
      continue;
    }
    seeded_shuffle(idx, splitmix64(seed ^ kImageStream ^ splitmix64(std::uint64_t(class_id))));
    std::size_t cut_val = n * ratios.train / 100;
    std::size_t cut_test = n * (ratios.train + ratios.val) / 100;
    // Guarantee one record in each non-zero-ratio split by borrowing from train.
    if (ratios.test > 0 && cut_test == n) cut_test = n - 1;
    if (ratios.val > 0 && cut_val == cut_test) cut_val = cut_test - 1;
    if (ratios.test > 0 && cut_test == cut_val && cut_val > 0) --cut_val;
    for (std::size_t k = 0; k < n; ++k) {
      out.assignment[idx[k]] = k < cut_val ? Split::Train : (k < cut_test ? Split::Val : Split::Test);
    }
  }
  return out;
}

std::string config_digest(const nlohmann::ordered_json& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

nlohmann::ordered_json manifest_header(const DatasetManifest& m) {
  nlohmann::ordered_json h;
  h["format"] = "qaida-manifest/1";
  h["seed"] = m.seed;
  h["config_digest"] = m.config_digest;
  h["image_px"] = m.image_px;
  h["binarized"] = m.binarized;
  h["ordering"] = ordering_name(m.class_table.ordering);
  h["tie_rule"] = m.class_table.tie_rule;
  h["num_classes"] = m.class_table.size();
  h["config"] = m.config;
  auto fonts = nlohmann::ordered_json::array();
  for (const auto& f : m.font_table) fonts.push_back({{"font_id", f.font_id}, {"partition", partition_name(f.partition)}});
  h["fonts"] = std::move(fonts);
  h["undersized_classes"] = m.undersized_classes;
  return h;
}

// Assigns splits for every record from the font partition and the per-class image split.
void assign_splits(DatasetManifest& m, double font_holdout, const SplitRatios& ratios, std::uint64_t seed) {
  std::vector<int> ids;
  for (const auto& f : m.font_table) ids.push_back(f.font_id);
  const FontSplit fonts = split_fonts(ids, font_holdout, seed);
  const std::set<int> unseen(fonts.unseen.begin(), fonts.unseen.end());
  for (auto& f : m.font_table) f.partition = unseen.count(f.font_id) ? Partition::Unseen : Partition::Seen;

  std::vector<ImageKey> seen_keys;
  std::vector<std::size_t> seen_index;
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    if (unseen.count(m.records[i].font_id)) {
      m.records[i].split = Split::Unseen;
    } else {
      seen_keys.push_back({m.records[i].class_id, m.records[i].font_id});
      seen_index.push_back(i);
    }
  }
  const ImageSplit split = split_images(seen_keys, ratios, seed);
  for (std::size_t k = 0; k < seen_index.size(); ++k) m.records[seen_index[k]].split = split.assignment[k];
  m.undersized_classes = split.undersized_classes;
  for (auto& r : m.records) r.path = record_path(r.class_id, r.font_id, r.split);
  m.seed = seed;
  m.config["font_holdout"] = font_holdout;
  m.config["ratios"] = ratios_json(ratios);
  m.config["seed"] = seed;
  m.config_digest = config_digest(m.config);
}

void remove_split_dirs(const fs::path& out_dir) {
  for (Split s : {Split::Train, Split::Val, Split::Test, Split::Unseen}) {
    std::error_code ec;
    fs::remove_all(out_dir / split_name(s), ec);
    if (ec) throw Error(Errc::IoFailure, "cannot clear " + (out_dir / split_name(s)).string() + ": " + ec.message());
  }
}

}  // namespace

void write_manifest(const fs::path& out_dir, const DatasetManifest& m) {
  std::string text = manifest_header(m).dump() + "\n";
  for (const auto& r : m.records) {
    nlohmann::ordered_json j;
    j["path"] = r.path;
    j["class_id"] = r.class_id;
    j["font_id"] = r.font_id;
    j["split"] = split_name(r.split);
    text += j.dump() + "\n";
  }
  write_text_file(out_dir / kManifestFile, text);
}

DatasetManifest read_manifest(const fs::path& out_dir) {
  const fs::path path = out_dir / kManifestFile;
  if (!fs::exists(path)) throw Error(Errc::ManifestMissing, "no " + path.string());
  DatasetManifest m;
  bool have_header = false;
  for_each_json_line(path, [&](const nlohmann::ordered_json& j) {
    if (!have_header) {
      if (j.value("format", "") != "qaida-manifest/1") throw Error(Errc::InvalidArgument, "unrecognized manifest header");
      m.seed = j.at("seed").get<std::uint64_t>();
      m.config_digest = j.at("config_digest").get<std::string>();
      m.image_px = j.at("image_px").get<int>();
      m.binarized = j.at("binarized").get<bool>();
      m.config = j.at("config");
      for (const auto& f : j.at("fonts")) {
        m.font_table.push_back({f.at("font_id").get<int>(), parse_partition(f.at("partition").get<std::string>())});
      }
      m.undersized_classes = j.at("undersized_classes").get<std::vector<int>>();
      have_header = true;
      return;
    }
    m.records.push_back({j.at("path").get<std::string>(), j.at("class_id").get<int>(), j.at("font_id").get<int>(),
                         parse_split(j.at("split").get<std::string>())});
  });
  if (!have_header) throw Error(Errc::InvalidArgument, "manifest is empty");
  const fs::path ligatures = out_dir / kLigaturesFile;
  if (fs::exists(ligatures)) m.class_table = read_ligatures_jsonl(ligatures);
  return m;
}

GenerateResult generate(std::span<const FontRecord> fonts, const ClassMap& classes, const GenerateOptions& options,
                        const fs::path& out_dir) {
  options.raster.validate();
  options.ratios.validate();
  if (options.downscale && options.raster.canvas_px % 2 != 0) {
    throw Error(Errc::OddDimensions, "cannot downscale a " + std::to_string(options.raster.canvas_px) + " px canvas");
  }
  if (fonts.empty() || classes.classes.empty()) throw Error(Errc::AllPairsSkipped, "no fonts or no classes to render");

  GenerateResult result;
  DatasetManifest& m = result.manifest;
  m.class_table = classes;
  m.image_px = options.downscale ? options.raster.canvas_px / 2 : options.raster.canvas_px;
  m.binarized = options.binarize;
  for (const auto& f : fonts) m.font_table.push_back({f.font_id(), Partition::Seen});
  std::sort(m.font_table.begin(), m.font_table.end(),
            [](const FontPartition& a, const FontPartition& b) { return a.font_id < b.font_id; });

  std::vector<const FontRecord*> font_by_pos;
  for (const auto& f : fonts) font_by_pos.push_back(&f);
  std::sort(font_by_pos.begin(), font_by_pos.end(),
            [](const FontRecord* a, const FontRecord* b) { return a->font_id() < b->font_id(); });

  // Shape each class once; decide coverage per (class, font).
  struct Job {
    std::size_t class_pos;
    const FontRecord* font;
  };
  std::vector<ShapedRun> runs;
  std::vector<bool> shaped_ok;
  runs.reserve(classes.size());
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const ClassEntry& entry = classes.classes[c];
    try {
      runs.push_back(shape(entry.ligature));
      shaped_ok.push_back(true);
    } catch (const Error& e) {
      runs.push_back(ShapedRun{{}, entry.ligature});
      shaped_ok.push_back(false);
      for (const FontRecord* f : font_by_pos) result.skipped.push_back({entry.class_id, f->font_id(), e.what()});
      continue;
    }
    for (const FontRecord* f : font_by_pos) {
      std::string missing;
      for (const auto& form : runs.back().forms) {
        if (!f->covers(form.codepoint)) {
          missing = format_codepoint(form.codepoint);
          break;
        }
      }
      if (missing.empty()) {
        jobs.push_back({c, f});
        m.records.push_back({"", entry.class_id, f->font_id(), Split::Train});
      } else {
        result.skipped.push_back({entry.class_id, f->font_id(), "font lacks " + missing});
      }
    }
  }
  if (jobs.empty()) throw Error(Errc::AllPairsSkipped, "no (class, font) pair has full presentation-form coverage");

  const RasterConfig& rc = options.raster;
  nlohmann::ordered_json config;
  config["canvas_px"] = rc.canvas_px;
  config["fit_fraction"] = rc.fit_fraction;
  config["supersample"] = rc.supersample;
  config["flatness_px"] = rc.flatness_px;
  config["background"] = rc.background;
  config["ink"] = rc.ink;
  config["downscale"] = options.downscale;
  config["binarize"] = options.binarize;
  config["binarize_threshold"] = rc.binarize_threshold;
  config["image_px"] = m.image_px;
  config["classes"] = {{"ordering", ordering_name(classes.ordering)},
                       {"count", classes.size()},
                       {"tie_rule", classes.tie_rule}};
  auto font_cfg = nlohmann::ordered_json::array();
  for (const FontRecord* f : font_by_pos) {
    font_cfg.push_back({{"font_id", f->font_id()}, {"family", f->family_name()}, {"glyph_count", f->glyph_count()}});
  }
  config["fonts"] = std::move(font_cfg);
  for (const auto& [k, v] : options.extra_config.items()) config[k] = v;
  m.config = std::move(config);
  assign_splits(m, options.font_holdout, options.ratios, options.seed);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + out_dir.string() + ": " + ec.message());
  fs::remove(out_dir / kManifestFile, ec);
  remove_split_dirs(out_dir);
  std::set<fs::path> dirs;
  for (const auto& r : m.records) dirs.insert((out_dir / r.path).parent_path());
  for (const auto& d : dirs) {
    fs::create_directories(d, ec);
    if (ec) throw Error(Errc::IoFailure, "cannot create " + d.string() + ": " + ec.message());
  }

  std::atomic<std::size_t> done{0};
  parallel_for(jobs.size(), options.workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    RasterImage img = rasterize(runs[job.class_pos], *job.font, rc);
    if (options.downscale) img = downscale_2x(img);
    if (options.binarize) img = binarize(img, rc.binarize_threshold);
    write_png(out_dir / m.records[i].path, img);
    const std::size_t n = done.fetch_add(1) + 1;
    if (options.progress) options.progress(n, jobs.size());
  });

  std::vector<FontListing> listings;
  for (const FontRecord* f : font_by_pos) listings.push_back(listing_for(*f, true));
  write_fonts_jsonl(out_dir / kFontsFile, listings);
  write_ligatures_jsonl(out_dir / kLigaturesFile, classes, m.config.at("classes"));
  std::string skipped;
  for (const auto& s : result.skipped) {
    nlohmann::ordered_json j;
    j["class_id"] = s.class_id;
    j["font_id"] = s.font_id;
    j["reason"] = s.reason;
    skipped += j.dump() + "\n";
  }
  write_text_file(out_dir / kSkippedFile, skipped);
  write_manifest(out_dir, m);
  return result;
}

DatasetManifest resplit(const fs::path& out_dir, double font_holdout, const SplitRatios& ratios, std::uint64_t seed) {
  DatasetManifest m = read_manifest(out_dir);
  const std::vector<ImageRecord> before = m.records;
  assign_splits(m, font_holdout, ratios, seed);
  // The old manifest goes first so an interrupted move never leaves a
  // manifest that disagrees with the tree.
  std::error_code ec;
  fs::remove(out_dir / kManifestFile, ec);
  if (ec) throw Error(Errc::IoFailure, "cannot remove old manifest: " + ec.message());
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    if (before[i].path == m.records[i].path) continue;
    const fs::path to = out_dir / m.records[i].path;
    fs::create_directories(to.parent_path(), ec);
    if (!ec) fs::rename(out_dir / before[i].path, to, ec);
    if (ec) throw Error(Errc::IoFailure, "cannot move " + before[i].path + ": " + ec.message());
  }
  for (Split s : {Split::Train, Split::Val, Split::Test, Split::Unseen}) {
    const fs::path root = out_dir / split_name(s);
    if (!fs::is_directory(root)) continue;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.is_directory() && fs::is_empty(entry.path())) fs::remove(entry.path(), ec);
    }
    if (fs::is_empty(root)) fs::remove(root, ec);
  }
  write_manifest(out_dir, m);
  return m;
}

VerifyReport verify(const fs::path& out_dir, const VerifyOptions& options) {
  if (!fs::exists(out_dir / kManifestFile)) throw Error(Errc::ManifestMissing, "no manifest in " + out_dir.string());
  DatasetManifest m;
  try {
    m = read_manifest(out_dir);
  } catch (const Error& e) {
    VerifyReport report;
    report.violations.push_back(std::string("manifest unreadable: ") + e.what());
    return report;
  }
  VerifyReport report = verify(m, out_dir, options);
  if (!fs::exists(out_dir / kLigaturesFile)) {
    report.violations.insert(report.violations.begin(), "class table ligatures.jsonl missing");
    report.ok = false;
  }
  return report;
}

VerifyReport verify(const DatasetManifest& m, const fs::path& out_dir, const VerifyOptions& options) {
  VerifyReport report;
  auto fail = [&](std::string msg) { report.violations.push_back(std::move(msg)); };
  if (config_digest(m.config) != m.config_digest) fail("config_digest does not match the recorded config");

  std::set<int> class_ids;
  for (std::size_t i = 0; i < m.class_table.classes.size(); ++i) {
    if (m.class_table.classes[i].class_id != int(i)) {
      fail("class table ids not dense: position " + std::to_string(i) + " holds id " +
           std::to_string(m.class_table.classes[i].class_id));
      break;
    }
    class_ids.insert(int(i));
  }
  std::map<int, Partition> partitions;
  for (const auto& f : m.font_table) {
    if (!partitions.emplace(f.font_id, f.partition).second) fail("font " + std::to_string(f.font_id) + " listed twice");
  }

  // One scan of the split directories serves both the existence and the
  // unreferenced-file checks.
  std::set<std::string> present;
  for (Split s : {Split::Train, Split::Val, Split::Test, Split::Unseen}) {
    const fs::path root = out_dir / split_name(s);
    if (!fs::is_directory(root)) continue;
    const std::size_t prefix = root.native().size() - split_name(s).size();
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file()) present.insert(entry.path().generic_string().substr(prefix));
    }
  }

  std::set<std::pair<int, int>> pairs;
  std::set<int> seen_fonts_used;
  std::set<int> unseen_fonts_used;
  for (const auto& r : m.records) {
    ++report.records_checked;
    const std::string where = r.path + ": ";
    if (!class_ids.count(r.class_id)) fail(where + "class_id " + std::to_string(r.class_id) + " not in class table");
    auto p = partitions.find(r.font_id);
    if (p == partitions.end()) {
      fail(where + "font_id " + std::to_string(r.font_id) + " not in font table");
    } else if ((r.split == Split::Unseen) != (p->second == Partition::Unseen)) {
      fail(where + "font-disjointness: split " + std::string(split_name(r.split)) + " but font " +
           std::to_string(r.font_id) + " is " + std::string(partition_name(p->second)));
    }
    (r.split == Split::Unseen ? unseen_fonts_used : seen_fonts_used).insert(r.font_id);
    if (!pairs.emplace(r.class_id, r.font_id).second) fail(where + "duplicate (class_id, font_id) pair");
    if (r.path != record_path(r.class_id, r.font_id, r.split)) {
      fail(where + "path does not match layout " + record_path(r.class_id, r.font_id, r.split));
    }
    const fs::path file = out_dir / r.path;
    if (!present.count(r.path) && !fs::is_regular_file(file)) {
      fail(where + "file missing");
      continue;
    }
    if (!options.decode_images) continue;
    try {
      const RasterImage img = read_png(file);
      if (img.width != m.image_px || img.height != m.image_px) {
        fail(where + "image is " + std::to_string(img.width) + "x" + std::to_string(img.height) + ", expected " +
             std::to_string(m.image_px));
      }
      if (m.binarized && std::any_of(img.pixels.begin(), img.pixels.end(), [](std::uint8_t v) { return v != 0 && v != 255; })) {
        fail(where + "binarized image has gray pixels");
      }
    } catch (const Error& e) {
      fail(where + "not a decodable PNG: " + e.what());
    }
  }
  for (int f : seen_fonts_used) {
    if (unseen_fonts_used.count(f)) fail("font-disjointness: font " + std::to_string(f) + " appears in seen and unseen splits");
  }
  for (std::size_t i = 1; i < m.records.size(); ++i) {
    const auto& a = m.records[i - 1];
    const auto& b = m.records[i];
    if (std::pair(a.class_id, a.font_id) >= std::pair(b.class_id, b.font_id)) {
      fail(b.path + ": records not in ascending (class_id, font_id) order");
      break;
    }
  }

  // The recorded assignment must be the one the seed and split parameters produce.
  try {
    DatasetManifest expected = m;
    assign_splits(expected, m.config.at("font_holdout").get<double>(),
                  SplitRatios::parse(m.config.at("ratios").get<std::string>()), m.config.at("seed").get<std::uint64_t>());
    for (std::size_t i = 0; i < m.font_table.size(); ++i) {
      if (expected.font_table[i].partition != m.font_table[i].partition) {
        fail("font " + std::to_string(m.font_table[i].font_id) + " partition differs from the seeded font split");
      }
    }
    for (std::size_t i = 0; i < m.records.size(); ++i) {
      if (expected.records[i].split != m.records[i].split) {
        fail(m.records[i].path + ": split differs from the seeded assignment (" +
             std::string(split_name(expected.records[i].split)) + ")");
      }
    }
  } catch (const std::exception& e) {
    fail(std::string("cannot recompute split assignment: ") + e.what());
  }

  std::set<std::string> listed;
  for (const auto& r : m.records) listed.insert(r.path);
  for (const auto& rel : present) {
    if (!listed.count(rel)) fail(rel + ": file not referenced by the manifest");
  }
  report.ok = report.violations.empty();
  return report;
}

}  // namespace qaida
