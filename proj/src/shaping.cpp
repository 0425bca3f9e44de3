#include "qaida/shaping.hpp"

#include <algorithm>
#include <array>

#include "qaida/error.hpp"
#include "qaida/utf8.hpp"

namespace qaida {

namespace {

struct JoiningEntry {
  char32_t cp;
  JoiningType type;
};

struct FormEntry {
  char32_t base;
  char32_t isolated;
  char32_t final_form;
  char32_t initial;
  char32_t medial;
};

struct LamAlefEntry {
  char32_t alef;
  char32_t isolated;
  char32_t final_form;
};

#include "arabic_table.inc"

constexpr char32_t kLam = 0x0644;

// U+06BA NOON GHUNNA is dual-joining in the UCD but has no initial or medial
// presentation form; it is treated as right-joining, as reference shapers do.
constexpr JoiningEntry kJoiningOverrides[] = {
    {0x06BA, JoiningType::R},
};

constexpr std::array<char32_t, 43> kUrduLetters = {
    0x0621, 0x0622, 0x0624, 0x0626, 0x0627, 0x0628, 0x062A, 0x062B, 0x062C, 0x062D, 0x062E,
    0x062F, 0x0630, 0x0631, 0x0632, 0x0633, 0x0634, 0x0635, 0x0636, 0x0637, 0x0638, 0x0639,
    0x063A, 0x0641, 0x0642, 0x0644, 0x0645, 0x0646, 0x0648, 0x0679, 0x067E, 0x0686, 0x0688,
    0x0691, 0x0698, 0x06A9, 0x06AF, 0x06BA, 0x06BE, 0x06C1, 0x06CC, 0x06D2, 0x06D3,
};

static_assert(std::is_sorted(std::begin(kJoiningTable), std::end(kJoiningTable),
                             [](const JoiningEntry& a, const JoiningEntry& b) { return a.cp < b.cp; }));
static_assert(std::is_sorted(std::begin(kFormTable), std::end(kFormTable),
                             [](const FormEntry& a, const FormEntry& b) { return a.base < b.base; }));
static_assert(std::is_sorted(kUrduLetters.begin(), kUrduLetters.end()));

const FormEntry* find_forms(char32_t base) {
  auto it = std::lower_bound(std::begin(kFormTable), std::end(kFormTable), base,
                             [](const FormEntry& e, char32_t c) { return e.base < c; });
  return (it != std::end(kFormTable) && it->base == base) ? &*it : nullptr;
}

const LamAlefEntry* find_lam_alef(char32_t alef) {
  for (const auto& e : kLamAlefTable) {
    if (e.alef == alef) return &e;
  }
  return nullptr;
}

bool joins_forward(JoiningType t) { return t == JoiningType::D || t == JoiningType::C; }
bool joins_backward(JoiningType t) { return t == JoiningType::D || t == JoiningType::R || t == JoiningType::C; }

bool is_space(char32_t c) {
  return c == U' ' || (c >= 0x09 && c <= 0x0D) || c == 0x85 || c == 0xA0 || c == 0x1680 ||
         (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000;
}

}  // namespace

char joining_type_letter(JoiningType jt) {
  switch (jt) {
    case JoiningType::D: return 'D';
    case JoiningType::R: return 'R';
    case JoiningType::U: return 'U';
    case JoiningType::C: return 'C';
    case JoiningType::T: return 'T';
  }
  return '?';
}

std::string_view form_class_name(FormClass fc) {
  switch (fc) {
    case FormClass::Isolated: return "isolated";
    case FormClass::Initial: return "initial";
    case FormClass::Medial: return "medial";
    case FormClass::Final: return "final";
  }
  return "?";
}

JoiningType joining_type(char32_t cp) {
  for (const auto& o : kJoiningOverrides) {
    if (o.cp == cp) return o.type;
  }
  auto it = std::lower_bound(std::begin(kJoiningTable), std::end(kJoiningTable), cp,
                             [](const JoiningEntry& e, char32_t c) { return e.cp < c; });
  return (it != std::end(kJoiningTable) && it->cp == cp) ? it->type : JoiningType::U;
}

bool joins(char32_t a, char32_t b) { return joins_forward(joining_type(a)) && joins_backward(joining_type(b)); }

Ligature::Ligature(std::u32string codepoints) : codepoints_(std::move(codepoints)) {
  if (codepoints_.empty() || codepoints_.size() > kMaxLigatureChars) {
    throw Error(Errc::InvalidLigature, "ligature must have 1.." + std::to_string(kMaxLigatureChars) +
                                           " characters, got " + std::to_string(codepoints_.size()));
  }
  for (std::size_t i = 0; i < codepoints_.size(); ++i) {
    if (joining_type(codepoints_[i]) == JoiningType::T) {
      throw Error(Errc::InvalidLigature, "transparent mark " + format_codepoint(codepoints_[i]) + " inside ligature");
    }
    if (i > 0 && !joins(codepoints_[i - 1], codepoints_[i])) {
      throw Error(Errc::InvalidLigature, format_codepoint(codepoints_[i - 1]) + " does not join " +
                                             format_codepoint(codepoints_[i]));
    }
  }
}

std::u32string strip_transparent(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (joining_type(c) != JoiningType::T) out.push_back(c);
  }
  return out;
}

std::vector<std::u32string> split_joined_runs(std::u32string_view word) {
  std::vector<std::u32string> runs;
  std::u32string current;
  for (std::size_t i = 0; i < word.size(); ++i) {
    current.push_back(word[i]);
    const bool boundary = i + 1 == word.size() || !joins(word[i], word[i + 1]);
    if (boundary) {
      runs.push_back(std::move(current));
      current.clear();
    }
  }
  return runs;
}

std::vector<Ligature> segment_ligatures(std::u32string_view word) {
  if (word.empty()) throw Error(Errc::EmptyWord, "cannot segment an empty word");
  for (char32_t c : word) {
    if (is_space(c)) throw Error(Errc::InvalidArgument, "word contains whitespace");
  }
  const std::u32string stripped = strip_transparent(word);
  if (stripped.empty()) throw Error(Errc::EmptyWord, "word has no letters after removing marks");
  std::vector<Ligature> out;
  for (auto& run : split_joined_runs(stripped)) out.emplace_back(std::move(run));
  return out;
}

std::vector<FormClass> contextual_classes(const Ligature& lig) {
  const auto& cps = lig.codepoints();
  std::vector<FormClass> classes(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const bool prev = i > 0 && joins(cps[i - 1], cps[i]);
    const bool next = i + 1 < cps.size() && joins(cps[i], cps[i + 1]);
    classes[i] = prev ? (next ? FormClass::Medial : FormClass::Final) : (next ? FormClass::Initial : FormClass::Isolated);
  }
  return classes;
}

char32_t presentation_form(char32_t base, FormClass fc) {
  const FormEntry* e = find_forms(base);
  if (!e) return 0;
  switch (fc) {
    case FormClass::Isolated: return e->isolated;
    case FormClass::Initial: return e->initial;
    case FormClass::Medial: return e->medial;
    case FormClass::Final: return e->final_form;
  }
  return 0;
}

ShapedRun shape(const Ligature& lig) {
  const auto& cps = lig.codepoints();
  const auto classes = contextual_classes(lig);
  std::vector<ShapedForm> logical;
  logical.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == kLam && i + 1 < cps.size()) {
      if (const LamAlefEntry* la = find_lam_alef(cps[i + 1])) {
        const bool after_join = classes[i] == FormClass::Final || classes[i] == FormClass::Medial;
        logical.push_back(after_join ? ShapedForm{la->final_form, FormClass::Final}
                                     : ShapedForm{la->isolated, FormClass::Isolated});
        ++i;
        continue;
      }
    }
    // Join-causing letters (tatweel) render as themselves in every context.
    const char32_t form = joining_type(cps[i]) == JoiningType::C ? cps[i] : presentation_form(cps[i], classes[i]);
    if (form == 0) {
      throw Error(Errc::NoPresentationForm, format_codepoint(cps[i]) + " has no " +
                                                std::string(form_class_name(classes[i])) + " form");
    }
    logical.push_back({form, classes[i]});
  }
  std::reverse(logical.begin(), logical.end());
  return ShapedRun{std::move(logical), lig};
}

std::u32string unshape(std::span<const ShapedForm> visual_forms) {
  std::u32string out;
  for (auto it = visual_forms.rbegin(); it != visual_forms.rend(); ++it) {
    const char32_t pf = it->codepoint;
    bool found = false;
    for (const auto& la : kLamAlefTable) {
      if (pf == la.isolated || pf == la.final_form) {
        out.push_back(kLam);
        out.push_back(la.alef);
        found = true;
        break;
      }
    }
    for (std::size_t k = 0; !found && k < std::size(kFormTable); ++k) {
      const FormEntry& e = kFormTable[k];
      if (pf == e.isolated || pf == e.final_form || pf == e.initial || pf == e.medial) {
        out.push_back(e.base);
        found = true;
      }
    }
    if (!found) out.push_back(pf);
  }
  return out;
}

std::span<const char32_t> urdu_letters() { return kUrduLetters; }

bool is_urdu_letter(char32_t cp) { return std::binary_search(kUrduLetters.begin(), kUrduLetters.end(), cp); }

std::vector<char32_t> urdu_font_alphabet() {
  std::vector<char32_t> out(kUrduLetters.begin(), kUrduLetters.end());
  for (char32_t base : kUrduLetters) {
    const JoiningType jt = joining_type(base);
    out.push_back(presentation_form(base, FormClass::Isolated));
    if (jt == JoiningType::D || jt == JoiningType::R) out.push_back(presentation_form(base, FormClass::Final));
    if (jt == JoiningType::D) {
      out.push_back(presentation_form(base, FormClass::Initial));
      out.push_back(presentation_form(base, FormClass::Medial));
    }
    if (const LamAlefEntry* la = find_lam_alef(base)) {
      out.push_back(la->isolated);
      out.push_back(la->final_form);
    }
  }
  out.erase(std::remove(out.begin(), out.end(), char32_t{0}), out.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qaida
