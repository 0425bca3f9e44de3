// qaida-forge: font store, corpus segmentation, shaping dump, dataset rendering,
// re-splitting and verification.
//
// Exit status: 0 success, 1 validation or processing failure, 2 usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <vector>

#include "qaida/corpus.hpp"
#include "qaida/dataset.hpp"
#include "qaida/error.hpp"
#include "qaida/font.hpp"
#include "qaida/parallel.hpp"
#include "qaida/shaping.hpp"
#include "qaida/utf8.hpp"

namespace fs = std::filesystem;
using namespace qaida;

namespace {

constexpr int kValidationFailure = 1;
constexpr int kUsageError = 2;

void progress(const std::string& msg) { std::cerr << "qaida-forge: " << msg << "\n"; }

std::string absolute_path(const std::string& p) { return p.empty() ? p : fs::absolute(p).lexically_normal().string(); }

const CLI::Validator kRatios(
    [](std::string& text) -> std::string {
      try {
        SplitRatios::parse(text);
      } catch (const Error& e) {
        return e.what();
      }
      return {};
    },
    "TRAIN:VAL:TEST", "split ratios");

const CLI::Validator kOpenUnit(
    [](std::string& text) -> std::string {
      double v = 0;
      if (!CLI::detail::lexical_cast(text, v) || !(v > 0 && v < 1)) return "must be a number strictly between 0 and 1";
      return {};
    },
    "(0,1)", "open unit interval");

struct Options {
  std::string fonts_dir, fonts_out;
  std::string fonts_in, alphabet = "urdu", filter_out;
  std::string corpus_in, ordering = "easiest", ligatures_out;
  int limit = 0;
  std::string text;
  std::string render_fonts, render_ligatures, out_dir;
  int size = 160;
  int supersample = 4;
  bool binarize = false, downscale = false;
  double font_holdout = 0.25;
  std::string ratios = "80:10:10";
  std::uint64_t seed = 0;
  int threads = 0;
};

// ---------------------------------------------------------------------------

int fonts_scan(const Options& o) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(o.fonts_dir)) {
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    if (e.is_regular_file() && ext == ".ttf") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<FontListing> listings;
  int rejected = 0;
  for (const auto& f : files) {
    try {
      listings.push_back(listing_for(load_font(f, int(listings.size())), true));
    } catch (const Error& e) {
      progress("skipping " + f.string() + ": " + e.what());
      ++rejected;
    }
  }
  if (listings.empty()) {
    progress("no loadable TrueType fonts in " + o.fonts_dir);
    return kValidationFailure;
  }
  write_fonts_jsonl(o.fonts_out, listings);
  progress("scanned " + std::to_string(listings.size()) + " fonts (" + std::to_string(rejected) + " rejected) -> " +
           o.fonts_out);
  return 0;
}

std::vector<FontRecord> load_listed(const std::vector<FontListing>& listings, bool kept_only) {
  std::vector<FontRecord> fonts;
  for (const auto& l : listings) {
    if (!kept_only || l.kept) fonts.push_back(load_font(l.file, l.font_id));
  }
  return fonts;
}

int fonts_filter(const Options& o) {
  const std::vector<FontListing> in = read_fonts_jsonl(o.fonts_in);
  const std::vector<FontRecord> fonts = load_listed(in, false);
  const FilterResult r = filter_fonts(fonts, urdu_font_alphabet());
  std::vector<FontListing> out;
  for (const auto& f : fonts) {
    const bool kept = std::any_of(r.kept.begin(), r.kept.end(), [&](const FontRecord& k) { return k.font_id() == f.font_id(); });
    out.push_back(listing_for(f, kept));
  }
  write_fonts_jsonl(o.filter_out, out);
  progress("kept " + std::to_string(r.kept.size()) + " of " + std::to_string(fonts.size()) +
           " fonts; canonical set has " + std::to_string(r.canonical_set.size()) + " codepoints -> " + o.filter_out);
  return 0;
}

int corpus_segment(const Options& o) {
  std::ifstream in(o.corpus_in, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + o.corpus_in);
  const CorpusStats stats = ingest_corpus(in, o.threads);
  progress(std::to_string(stats.total_words) + " words, " + std::to_string(stats.total_ligatures) + " ligatures, " +
           std::to_string(stats.entries.size()) + " distinct, " + std::to_string(stats.rejected_runs) +
           " over-long runs rejected");
  const Ordering ordering = parse_ordering(o.ordering);
  const int limit = o.limit > 0 ? o.limit : int(stats.entries.size());
  ClassMap classes;
  switch (ordering) {
    case Ordering::TopK: classes = top_k(stats, limit); break;
    case Ordering::Easiest: classes = easiest_n(stats, limit); break;
    case Ordering::Full: classes = full_inventory(stats); break;
  }
  nlohmann::ordered_json cfg;
  cfg["input"] = o.corpus_in;
  cfg["ordering"] = o.ordering;
  cfg["limit"] = ordering == Ordering::Full ? int(classes.size()) : limit;
  write_ligatures_jsonl(o.ligatures_out, classes, cfg);
  progress(std::to_string(classes.size()) + " classes -> " + o.ligatures_out);
  return 0;
}

int shape_dump(const Options& o) {
  const std::u32string text = decode_utf8(o.text);
  std::printf("text: %s\n", o.text.c_str());
  std::printf("chars:\n");
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::printf("  %zu %s %c %s\n", i, format_codepoint(text[i]).c_str(), joining_type_letter(joining_type(text[i])),
                encode_utf8(text.substr(i, 1)).c_str());
  }
  // Pieces break at anything that is neither an Urdu letter nor a mark.
  std::vector<std::u32string> pieces(1);
  for (char32_t c : text) {
    if (is_urdu_letter(c) || joining_type(c) == JoiningType::T || c == 0x0640) {
      pieces.back().push_back(c);
    } else if (!pieces.back().empty()) {
      pieces.emplace_back();
    }
  }
  std::vector<Ligature> ligatures;
  for (const auto& p : pieces) {
    const std::u32string letters = strip_transparent(p);
    if (letters.empty()) continue;
    for (auto& lig : segment_ligatures(letters)) ligatures.push_back(std::move(lig));
  }
  std::printf("ligatures: %zu\n", ligatures.size());
  for (std::size_t i = 0; i < ligatures.size(); ++i) {
    std::string base, forms;
    for (char32_t c : ligatures[i].codepoints()) base += (base.empty() ? "" : " ") + format_codepoint(c);
    const ShapedRun run = shape(ligatures[i]);
    for (const auto& f : run.forms) {
      forms += (forms.empty() ? "" : " ") + format_codepoint(f.codepoint) + "/" + std::string(form_class_name(f.form_class));
    }
    std::printf("  [%zu] %s  %s -> %s\n", i, encode_utf8(ligatures[i].codepoints()).c_str(), base.c_str(), forms.c_str());
  }
  return 0;
}

int render(const Options& o) {
  const std::vector<FontRecord> fonts = load_listed(read_fonts_jsonl(o.render_fonts), true);
  const ClassMap classes = read_ligatures_jsonl(o.render_ligatures);
  GenerateOptions g;
  g.raster.canvas_px = o.size;
  g.raster.supersample = o.supersample;
  g.raster.validate();
  g.binarize = o.binarize;
  g.downscale = o.downscale;
  g.font_holdout = o.font_holdout;
  g.ratios = SplitRatios::parse(o.ratios);
  g.seed = o.seed;
  g.workers = o.threads;
  g.extra_config["fonts_file"] = o.render_fonts;
  g.extra_config["ligatures_file"] = o.render_ligatures;
  std::mutex mu;
  std::size_t last_decile = 0;
  g.progress = [&](std::size_t done, std::size_t total) {
    const std::size_t decile = done * 10 / total;
    std::lock_guard lock(mu);
    if (decile > last_decile) {
      last_decile = decile;
      progress("rendered " + std::to_string(done) + "/" + std::to_string(total));
    }
  };
  progress("rendering " + std::to_string(classes.size()) + " classes x " + std::to_string(fonts.size()) + " fonts on " +
           std::to_string(o.threads) + " threads");
  const GenerateResult r = generate(fonts, classes, g, o.out_dir);
  progress(std::to_string(r.manifest.records.size()) + " images, " + std::to_string(r.skipped.size()) +
           " pairs skipped, " + std::to_string(r.manifest.undersized_classes.size()) + " undersized classes -> " +
           o.out_dir);
  return 0;
}

int split(const Options& o) {
  const DatasetManifest m = resplit(o.out_dir, o.font_holdout, SplitRatios::parse(o.ratios), o.seed);
  std::size_t counts[4] = {};
  for (const auto& r : m.records) ++counts[int(r.split)];
  std::printf("train %zu val %zu test %zu unseen %zu\n", counts[0], counts[1], counts[2], counts[3]);
  return 0;
}

int verify_cmd(const Options& o) {
  const VerifyReport r = verify(o.out_dir);
  for (const auto& v : r.violations) std::printf("violation: %s\n", v.c_str());
  std::printf("%s: %zu records checked, %zu violations\n", r.ok ? "ok" : "failed", r.records_checked, r.violations.size());
  return r.ok ? 0 : kValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic Urdu ligature dataset forge", "qaida-forge"};
  app.set_config("--config", "", "Key-value config file; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;
  o.threads = default_worker_count();

  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (default: QAIDA_FORGE_THREADS or logical cores)")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* fonts = app.add_subcommand("fonts", "Font store commands");
  fonts->require_subcommand(1);
  CLI::App* scan = fonts->add_subcommand("scan", "Load every .ttf in a directory and list it");
  scan->add_option("--dir", o.fonts_dir, "Font directory")->required()->check(CLI::ExistingDirectory);
  scan->add_option("--out", o.fonts_out, "Output fonts.jsonl")->required();
  CLI::App* filter = fonts->add_subcommand("filter", "Keep fonts covering the canonical alphabet signature");
  filter->add_option("--fonts", o.fonts_in, "Input fonts.jsonl")->required()->check(CLI::ExistingFile);
  filter->add_option("--alphabet", o.alphabet, "Alphabet")->check(CLI::IsMember({"urdu"}));
  filter->add_option("--out", o.filter_out, "Output fonts.jsonl with kept flags")->required();

  CLI::App* corpus = app.add_subcommand("corpus", "Corpus commands");
  corpus->require_subcommand(1);
  CLI::App* segment = corpus->add_subcommand("segment", "Build the ligature class table from UTF-8 text");
  segment->add_option("--in", o.corpus_in, "Corpus text")->required()->check(CLI::ExistingFile);
  segment->add_option("--ordering", o.ordering, "Class ordering")->check(CLI::IsMember({"easiest", "top_k", "full"}));
  segment->add_option("--limit", o.limit, "Number of classes (default: all)")->check(CLI::PositiveNumber);
  segment->add_option("--out", o.ligatures_out, "Output ligatures.jsonl")->required();
  add_threads(segment);

  CLI::App* shape_cmd = app.add_subcommand("shape", "Print joining types, ligatures and presentation forms");
  shape_cmd->add_option("--text", o.text, "UTF-8 text")->required();

  CLI::App* render_cmd = app.add_subcommand("render", "Render, split and write a dataset");
  render_cmd->add_option("--fonts", o.render_fonts, "Filtered fonts.jsonl")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--ligatures", o.render_ligatures, "ligatures.jsonl")->required()->check(CLI::ExistingFile);
  render_cmd->add_option("--size", o.size, "Canvas size in pixels")->check(CLI::PositiveNumber);
  render_cmd->add_option("--supersample", o.supersample, "Samples per pixel axis")->check(CLI::PositiveNumber);
  render_cmd->add_flag("--binarize", o.binarize, "Threshold images to black and white");
  render_cmd->add_flag("--downscale", o.downscale, "Halve the rendered canvas (160 -> 80)");
  render_cmd->add_option("--font-holdout", o.font_holdout, "Fraction of fonts held out as unseen")->check(kOpenUnit);
  render_cmd->add_option("--ratios", o.ratios, "Seen-font image split")->check(kRatios);
  render_cmd->add_option("--seed", o.seed, "Split seed");
  render_cmd->add_option("--out-dir", o.out_dir, "Dataset directory")->required();
  add_threads(render_cmd);

  CLI::App* split_cmd = app.add_subcommand("split", "Re-split an existing dataset in place");
  split_cmd->add_option("--out-dir", o.out_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  split_cmd->add_option("--font-holdout", o.font_holdout, "Fraction of fonts held out as unseen")->check(kOpenUnit);
  split_cmd->add_option("--ratios", o.ratios, "Seen-font image split")->check(kRatios);
  split_cmd->add_option("--seed", o.seed, "Split seed");

  CLI::App* verify_sub = app.add_subcommand("verify", "Check a dataset against its manifest");
  verify_sub->add_option("--out-dir", o.out_dir, "Dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qaida-forge: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
      failing = sub;
    }
    std::cerr << failing->help();
    return kUsageError;
  }

  for (std::string* p : {&o.fonts_dir, &o.fonts_out, &o.fonts_in, &o.filter_out, &o.corpus_in, &o.ligatures_out,
                         &o.render_fonts, &o.render_ligatures, &o.out_dir}) {
    *p = absolute_path(*p);
  }

  try {
    if (scan->parsed()) return fonts_scan(o);
    if (filter->parsed()) return fonts_filter(o);
    if (segment->parsed()) return corpus_segment(o);
    if (shape_cmd->parsed()) return shape_dump(o);
    if (render_cmd->parsed()) return render(o);
    if (split_cmd->parsed()) return split(o);
    if (verify_sub->parsed()) return verify_cmd(o);
  } catch (const std::exception& e) {
    std::cerr << "qaida-forge: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kUsageError;
}
