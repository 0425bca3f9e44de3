#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qaida/corpus.hpp"
#include "qaida/font.hpp"
#include "qaida/raster.hpp"

namespace qaida {

enum class Split { Train, Val, Test, Unseen };
enum class Partition { Seen, Unseen };

std::string_view split_name(Split s);
Split parse_split(std::string_view name);  // throws Error{InvalidArgument}
std::string_view partition_name(Partition p);
Partition parse_partition(std::string_view name);

struct ImageKey {
  int class_id = 0;
  int font_id = 0;
};

struct ImageRecord {
  std::string path;  // relative to the dataset root
  int class_id = 0;
  int font_id = 0;
  Split split = Split::Train;

  friend bool operator==(const ImageRecord&, const ImageRecord&) = default;
};

struct FontPartition {
  int font_id = 0;
  Partition partition = Partition::Seen;
};

/// "<split>/<class_id:05>/<font_id:03>.png"
std::string record_path(int class_id, int font_id, Split split);

struct FontSplit {
  std::vector<int> seen;    // ascending
  std::vector<int> unseen;  // ascending
};

/// Seeded uniform holdout of round(holdout_fraction × N) fonts. The result
/// depends only on the set of ids and the seed, not their input order.
/// Throws Error{TooFewFonts} with fewer than two fonts or when either side
/// would be empty.
FontSplit split_fonts(std::span<const int> font_ids, double holdout_fraction, std::uint64_t seed);

struct SplitRatios {
  int train = 80;
  int val = 10;
  int test = 10;

  /// Throws Error{InvalidArgument} unless all are non-negative and sum to 100.
  void validate() const;
  /// Parses "80:10:10".
  static SplitRatios parse(std::string_view text);
  std::string str() const;
};

struct ImageSplit {
  std::vector<Split> assignment;        // parallel to the input records
  std::vector<int> undersized_classes;  // classes with < 3 records, all sent to train
};

/// Per-class stratified split. Within each class the records are ordered by
/// font_id, shuffled with a class-specific stream derived from `seed`, and
/// cut at floor(train%) and floor((train+val)%). A class with at least three
/// records gets at least one record in each split.
ImageSplit split_images(std::span<const ImageKey> records, const SplitRatios& ratios, std::uint64_t seed);

struct SkippedPair {
  int class_id = 0;
  int font_id = 0;
  std::string reason;
};

struct DatasetManifest {
  std::vector<ImageRecord> records;  // ascending (class_id, font_id)
  ClassMap class_table;
  std::vector<FontPartition> font_table;  // ascending font_id
  std::uint64_t seed = 0;
  std::string config_digest;
  nlohmann::ordered_json config;
  int image_px = 0;
  bool binarized = false;
  std::vector<int> undersized_classes;
};

struct GenerateOptions {
  RasterConfig raster;
  bool binarize = false;
  bool downscale = false;
  double font_holdout = 0.25;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Extra fields echoed into the manifest config (e.g. input files).
  nlohmann::ordered_json extra_config = nlohmann::ordered_json::object();
  /// Called from worker threads as images complete.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct GenerateResult {
  DatasetManifest manifest;
  std::vector<SkippedPair> skipped;
};

/// Renders every (class, font) pair the font can fully cover into
/// `out_dir`, splits them, and writes manifest.jsonl last. Output bytes do
/// not depend on `workers`. Throws Error{AllPairsSkipped} when nothing can
/// be rendered and Error{IoFailure} on write errors.
GenerateResult generate(std::span<const FontRecord> fonts, const ClassMap& classes, const GenerateOptions& options,
                        const std::filesystem::path& out_dir);

/// Re-partitions an existing dataset with new split parameters, moving
/// images to their new split directories and rewriting the manifest.
DatasetManifest resplit(const std::filesystem::path& out_dir, double font_holdout, const SplitRatios& ratios,
                        std::uint64_t seed);

inline constexpr std::string_view kManifestFile = "manifest.jsonl";
inline constexpr std::string_view kLigaturesFile = "ligatures.jsonl";
inline constexpr std::string_view kFontsFile = "fonts.jsonl";
inline constexpr std::string_view kSkippedFile = "skipped.jsonl";

/// Digest of a config object as recorded in manifest headers.
std::string config_digest(const nlohmann::ordered_json& config);

void write_manifest(const std::filesystem::path& out_dir, const DatasetManifest& manifest);
/// Reads manifest.jsonl plus the class table in ligatures.jsonl. Throws
/// Error{ManifestMissing} when there is no manifest.
DatasetManifest read_manifest(const std::filesystem::path& out_dir);

struct VerifyReport {
  bool ok = false;
  std::size_t records_checked = 0;
  std::vector<std::string> violations;
};

struct VerifyOptions {
  bool decode_images = true;  // false: existence only, skip size and pixel checks
};

/// Checks files, image sizes, split/partition consistency, and id tables.
/// Throws Error{ManifestMissing}.
VerifyReport verify(const std::filesystem::path& out_dir, const VerifyOptions& options = {});

/// Same checks for a manifest already in memory, against the tree at `out_dir`.
VerifyReport verify(const DatasetManifest& manifest, const std::filesystem::path& out_dir,
                    const VerifyOptions& options = {});

}  // namespace qaida
