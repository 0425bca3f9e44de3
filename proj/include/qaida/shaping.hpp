#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qaida {

/// Unicode joining type: D dual, R right, U non-joining, C join-causing,
/// T transparent.
enum class JoiningType { D, R, U, C, T };

enum class FormClass { Isolated, Initial, Medial, Final };

char joining_type_letter(JoiningType jt);
std::string_view form_class_name(FormClass fc);

/// Bundled joining type, or U for codepoints outside the table.
JoiningType joining_type(char32_t cp);

/// True iff a letter `a` followed (logically) by `b` connects: a ∈ {D,C}, b ∈ {D,R,C}.
bool joins(char32_t a, char32_t b);

inline constexpr int kMaxLigatureChars = 8;

/// A connected run of non-transparent codepoints in logical order.
class Ligature {
 public:
  /// Validates the run: 1..kMaxLigatureChars codepoints, no transparent
  /// marks, every adjacent pair joins. Throws Error{InvalidLigature}.
  explicit Ligature(std::u32string codepoints);

  const std::u32string& codepoints() const { return codepoints_; }
  int n_chars() const { return static_cast<int>(codepoints_.size()); }

  friend auto operator<=>(const Ligature&, const Ligature&) = default;
  friend bool operator==(const Ligature&, const Ligature&) = default;

 private:
  std::u32string codepoints_;
};

struct ShapedForm {
  char32_t codepoint = 0;
  FormClass form_class = FormClass::Isolated;

  friend bool operator==(const ShapedForm&, const ShapedForm&) = default;
};

struct ShapedRun {
  std::vector<ShapedForm> forms;  // visual (left-to-right) order
  Ligature source;
};

/// Removes transparent codepoints (diacritics).
std::u32string strip_transparent(std::u32string_view text);

/// Splits a diacritic-stripped word at every non-joining adjacent pair.
/// Segments are returned without the length cap that Ligature enforces.
std::vector<std::u32string> split_joined_runs(std::u32string_view word);

/// Throws Error{EmptyWord} for empty input (or input that is all marks),
/// Error{InvalidArgument} if the word contains whitespace, and
/// Error{InvalidLigature} if a run exceeds kMaxLigatureChars.
std::vector<Ligature> segment_ligatures(std::u32string_view word);

/// Contextual class of each codepoint of `lig`, logical order.
std::vector<FormClass> contextual_classes(const Ligature& lig);

/// Presentation form for (base, class), or 0 if the table has none.
char32_t presentation_form(char32_t base, FormClass fc);

/// Throws Error{NoPresentationForm}.
ShapedRun shape(const Ligature& lig);

/// Inverse of shape: logical base codepoints, lam-alef expanded.
std::u32string unshape(std::span<const ShapedForm> visual_forms);

/// The Urdu letters the corpus pipeline keeps, sorted ascending.
std::span<const char32_t> urdu_letters();
bool is_urdu_letter(char32_t cp);

/// Codepoints a font must map to render every Urdu ligature: the letters
/// plus each presentation form they shape into, sorted ascending.
std::vector<char32_t> urdu_font_alphabet();

}  // namespace qaida
