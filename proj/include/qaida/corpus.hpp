#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qaida/shaping.hpp"

namespace qaida {

struct CorpusStats {
  std::map<Ligature, std::int64_t> entries;  // ligature -> frequency
  std::int64_t total_words = 0;
  std::int64_t total_ligatures = 0;
  std::int64_t rejected_runs = 0;  // joined runs longer than kMaxLigatureChars

  /// Commutative, associative accumulation of another shard's counts.
  void merge(const CorpusStats& other);

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Adds one line of UTF-8 text. Whitespace separates words; diacritics are
/// dropped; any other codepoint that is not an Urdu letter (digits,
/// punctuation, Latin, ZWNJ...) breaks the surrounding letters apart, since
/// it interrupts joining when rendered. Throws Error{InvalidUtf8}.
void ingest_line(CorpusStats& stats, std::string_view utf8_line);

/// Reads every line of `in`; lines are sharded over `workers` threads and
/// merged, so the result does not depend on the worker count.
CorpusStats ingest_corpus(std::istream& in, int workers = 1);
CorpusStats ingest_text(std::string_view utf8_text);

enum class Ordering { Easiest, TopK, Full };

std::string_view ordering_name(Ordering o);
Ordering parse_ordering(std::string_view name);  // throws Error{InvalidArgument}

struct ClassEntry {
  int class_id = 0;
  Ligature ligature;
  std::int64_t frequency = 0;

  int n_chars() const { return ligature.n_chars(); }
};

struct ClassMap {
  Ordering ordering = Ordering::Easiest;
  std::string tie_rule;
  std::vector<ClassEntry> classes;

  std::size_t size() const { return classes.size(); }
};

inline constexpr std::string_view kTopKTieRule = "frequency desc, n_chars asc, codepoints asc";
inline constexpr std::string_view kEasiestTieRule = "n_chars asc, frequency desc, codepoints asc";

/// The k most frequent ligatures. Throws Error{KTooLarge}.
ClassMap top_k(const CorpusStats& stats, int k);
/// The n shortest ligatures. Throws Error{NTooLarge}.
ClassMap easiest_n(const CorpusStats& stats, int n);
/// Whole inventory in easiest order, so every easiest_n is a prefix of it.
ClassMap full_inventory(const CorpusStats& stats);

/// ligatures.jsonl: a header line {"ordering", "tie_rule", "config"} then one
/// {"class_id", "codepoints", "n_chars", "frequency"} line per class.
void write_ligatures_jsonl(const std::filesystem::path& path, const ClassMap& classes,
                           const nlohmann::ordered_json& config = nlohmann::ordered_json::object());
ClassMap read_ligatures_jsonl(const std::filesystem::path& path);

}  // namespace qaida
