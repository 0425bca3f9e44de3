#include "qaida/corpus.hpp"

#include <algorithm>

#include "qaida/error.hpp"
#include "qaida/parallel.hpp"
#include "qaida/utf8.hpp"
#include "text_io.hpp"

namespace qaida {

namespace {

bool is_separator(char32_t c) {
  return c == U' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 ||
         c == 0xFEFF;
}

void add_piece(CorpusStats& stats, const std::u32string& piece) {
  for (auto& run : split_joined_runs(piece)) {
    if (run.size() > std::size_t(kMaxLigatureChars)) {
      ++stats.rejected_runs;
      continue;
    }
    ++stats.entries[Ligature(std::move(run))];
    ++stats.total_ligatures;
  }
}

std::vector<ClassEntry> ranked(const CorpusStats& stats, Ordering ordering) {
  std::vector<ClassEntry> all;
  all.reserve(stats.entries.size());
  for (const auto& [lig, freq] : stats.entries) all.push_back({0, lig, freq});
  if (ordering == Ordering::TopK) {
    std::sort(all.begin(), all.end(), [](const ClassEntry& a, const ClassEntry& b) {
      if (a.frequency != b.frequency) return a.frequency > b.frequency;
      if (a.n_chars() != b.n_chars()) return a.n_chars() < b.n_chars();
      return a.ligature.codepoints() < b.ligature.codepoints();
    });
  } else {
    std::sort(all.begin(), all.end(), [](const ClassEntry& a, const ClassEntry& b) {
      if (a.n_chars() != b.n_chars()) return a.n_chars() < b.n_chars();
      if (a.frequency != b.frequency) return a.frequency > b.frequency;
      return a.ligature.codepoints() < b.ligature.codepoints();
    });
  }
  for (std::size_t i = 0; i < all.size(); ++i) all[i].class_id = int(i);
  return all;
}

ClassMap take(const CorpusStats& stats, Ordering ordering, int count, Errc too_large) {
  if (count < 1) throw Error(Errc::InvalidArgument, "class count must be at least 1");
  if (std::size_t(count) > stats.entries.size()) {
    throw Error(too_large, "requested " + std::to_string(count) + " classes but the inventory has " +
                               std::to_string(stats.entries.size()));
  }
  ClassMap map;
  map.ordering = ordering;
  map.tie_rule = std::string(ordering == Ordering::TopK ? kTopKTieRule : kEasiestTieRule);
  map.classes = ranked(stats, ordering);
  map.classes.erase(map.classes.begin() + count, map.classes.end());
  return map;
}

}  // namespace

void CorpusStats::merge(const CorpusStats& other) {
  for (const auto& [lig, freq] : other.entries) entries[lig] += freq;
  total_words += other.total_words;
  total_ligatures += other.total_ligatures;
  rejected_runs += other.rejected_runs;
}

void ingest_line(CorpusStats& stats, std::string_view utf8_line) {
  const std::u32string text = decode_utf8(utf8_line);
  std::u32string piece;
  bool word_has_letters = false;
  auto end_piece = [&] {
    if (!piece.empty()) add_piece(stats, piece);
    piece.clear();
  };
  for (char32_t c : text) {
    if (is_separator(c)) {
      end_piece();
      if (word_has_letters) ++stats.total_words;
      word_has_letters = false;
    } else if (is_urdu_letter(c)) {
      piece.push_back(c);
      word_has_letters = true;
    } else if (joining_type(c) != JoiningType::T) {
      end_piece();
    }
  }
  end_piece();
  if (word_has_letters) ++stats.total_words;
}

CorpusStats ingest_corpus(std::istream& in, int workers) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  const int shards = std::max(1, std::min<int>(workers, int(lines.size())));
  std::vector<CorpusStats> partial(shards);
  parallel_for(std::size_t(shards), shards, [&](std::size_t s) {
    const std::size_t lo = lines.size() * s / shards;
    const std::size_t hi = lines.size() * (s + 1) / shards;
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        ingest_line(partial[s], lines[i]);
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  });
  CorpusStats total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

CorpusStats ingest_text(std::string_view utf8_text) {
  CorpusStats stats;
  std::size_t start = 0;
  while (start <= utf8_text.size()) {
    std::size_t nl = utf8_text.find('\n', start);
    if (nl == std::string_view::npos) nl = utf8_text.size();
    ingest_line(stats, utf8_text.substr(start, nl - start));
    start = nl + 1;
  }
  return stats;
}

std::string_view ordering_name(Ordering o) {
  switch (o) {
    case Ordering::Easiest: return "easiest";
    case Ordering::TopK: return "top_k";
    case Ordering::Full: return "full";
  }
  return "?";
}

Ordering parse_ordering(std::string_view name) {
  if (name == "easiest") return Ordering::Easiest;
  if (name == "top_k") return Ordering::TopK;
  if (name == "full") return Ordering::Full;
  throw Error(Errc::InvalidArgument, "unknown ordering '" + std::string(name) + "'");
}

ClassMap top_k(const CorpusStats& stats, int k) { return take(stats, Ordering::TopK, k, Errc::KTooLarge); }

ClassMap easiest_n(const CorpusStats& stats, int n) { return take(stats, Ordering::Easiest, n, Errc::NTooLarge); }

ClassMap full_inventory(const CorpusStats& stats) {
  if (stats.entries.empty()) throw Error(Errc::InvalidArgument, "corpus has no ligatures");
  ClassMap map = take(stats, Ordering::Easiest, int(stats.entries.size()), Errc::NTooLarge);
  map.ordering = Ordering::Full;
  return map;
}

void write_ligatures_jsonl(const std::filesystem::path& path, const ClassMap& classes,
                           const nlohmann::ordered_json& config) {
  nlohmann::ordered_json header;
  header["ordering"] = ordering_name(classes.ordering);
  header["tie_rule"] = classes.tie_rule;
  header["config"] = config;
  std::string text = header.dump() + "\n";
  for (const auto& c : classes.classes) {
    nlohmann::ordered_json j;
    j["class_id"] = c.class_id;
    auto cps = nlohmann::ordered_json::array();
    for (char32_t cp : c.ligature.codepoints()) cps.push_back(format_codepoint(cp));
    j["codepoints"] = std::move(cps);
    j["n_chars"] = c.n_chars();
    j["frequency"] = c.frequency;
    text += j.dump() + "\n";
  }
  write_text_file(path, text);
}

ClassMap read_ligatures_jsonl(const std::filesystem::path& path) {
  ClassMap map;
  bool have_header = false;
  for_each_json_line(path, [&](const nlohmann::ordered_json& j) {
    if (!j.contains("class_id")) {
      map.ordering = parse_ordering(j.at("ordering").get<std::string>());
      map.tie_rule = j.at("tie_rule").get<std::string>();
      have_header = true;
      return;
    }
    std::u32string cps;
    for (const auto& s : j.at("codepoints")) cps.push_back(parse_codepoint(s.get<std::string>()));
    ClassEntry e{j.at("class_id").get<int>(), Ligature(std::move(cps)), j.at("frequency").get<std::int64_t>()};
    if (e.n_chars() != j.at("n_chars").get<int>()) {
      throw Error(Errc::InvalidArgument, "n_chars mismatch for class " + std::to_string(e.class_id));
    }
    map.classes.push_back(std::move(e));
  });
  if (!have_header) throw Error(Errc::InvalidArgument, path.string() + " has no header line");
  return map;
}

}  // namespace qaida
