// Regenerates src/arabic_table.inc from the ICU build's Unicode Character
// Database. Output is committed; the library never links ICU.
//
//   c++ -std=c++20 tools/gen_arabic_table.cpp -licuuc -o gen && ./gen > src/arabic_table.inc

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <array>
#include <cstdio>
#include <map>
#include <vector>

namespace {

struct Forms {
  std::array<UChar32, 4> form{};  // isolated, final, initial, medial
};

char joining_letter(UChar32 cp) {
  switch (u_getIntPropertyValue(cp, UCHAR_JOINING_TYPE)) {
    case U_JT_DUAL_JOINING: return 'D';
    case U_JT_RIGHT_JOINING: return 'R';
    case U_JT_JOIN_CAUSING: return 'C';
    case U_JT_TRANSPARENT: return 'T';
    case U_JT_LEFT_JOINING: return 'L';
    default: return 'U';
  }
}

}  // namespace

int main() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfkd = icu::Normalizer2::getNFKDInstance(status);
  if (U_FAILURE(status)) return 1;

  std::map<UChar32, Forms> single;
  std::map<UChar32, Forms> lam_alef;
  auto scan = [&](UChar32 lo, UChar32 hi) {
    for (UChar32 pf = lo; pf <= hi; ++pf) {
      int slot = -1;
      switch (u_getIntPropertyValue(pf, UCHAR_DECOMPOSITION_TYPE)) {
        case U_DT_ISOLATED: slot = 0; break;
        case U_DT_FINAL: slot = 1; break;
        case U_DT_INITIAL: slot = 2; break;
        case U_DT_MEDIAL: slot = 3; break;
        default: continue;
      }
      icu::UnicodeString raw;
      if (!nfkd->getRawDecomposition(pf, raw)) continue;
      if (raw.countChar32() == 1) {
        single[raw.char32At(0)].form[slot] = pf;
      } else if (raw.countChar32() == 2 && raw.char32At(0) == 0x0644) {
        lam_alef[raw.char32At(1)].form[slot] = pf;
      }
    }
  };
  scan(0xFB50, 0xFDFF);
  scan(0xFE70, 0xFEFF);

  UVersionInfo version;
  u_getUnicodeVersion(version);
  std::printf("// Generated by tools/gen_arabic_table.cpp from Unicode %d.%d data.\n", version[0], version[1]);
  std::printf("// Do not edit by hand. Overrides applied after generation are listed in\n");
  std::printf("// shaping.cpp next to the table lookup.\n\n");

  std::printf("// {codepoint, joining type}\n");
  std::printf("inline constexpr JoiningEntry kJoiningTable[] = {\n");
  for (UChar32 cp = 0x0600; cp <= 0x06FF; ++cp) {
    const char jt = joining_letter(cp);
    if (jt == 'U') continue;
    std::printf("    {0x%04X, JoiningType::%c},\n", cp, jt);
  }
  for (UChar32 cp : {0x200D}) std::printf("    {0x%04X, JoiningType::%c},\n", cp, joining_letter(cp));
  std::printf("};\n\n");

  std::printf("// {base, isolated, final, initial, medial}; 0 = no such form\n");
  std::printf("inline constexpr FormEntry kFormTable[] = {\n");
  for (const auto& [base, f] : single) {
    if (base < 0x0600 || base > 0x06FF) continue;
    std::printf("    {0x%04X, 0x%04X, 0x%04X, 0x%04X, 0x%04X},\n", base, f.form[0], f.form[1], f.form[2], f.form[3]);
  }
  std::printf("};\n\n");

  std::printf("// {alef variant, lam-alef isolated, lam-alef final}\n");
  std::printf("inline constexpr LamAlefEntry kLamAlefTable[] = {\n");
  for (const auto& [alef, f] : lam_alef) {
    const bool alef_variant = alef == 0x0622 || alef == 0x0623 || alef == 0x0625 || alef == 0x0627;
    if (!alef_variant || f.form[0] == 0 || f.form[1] == 0) continue;
    std::printf("    {0x%04X, 0x%04X, 0x%04X},\n", alef, f.form[0], f.form[1]);
  }
  std::printf("};\n");
  return 0;
}
