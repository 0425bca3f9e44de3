#pragma once

#include <string>
#include <string_view>

namespace qaida {

/// Strict UTF-8 decode: rejects overlongs, surrogates, and truncated
/// sequences with Error{InvalidUtf8}.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view cps);

/// "U+067E" style, at least four hex digits.
std::string format_codepoint(char32_t cp);
/// Accepts "U+067E", "u+067e" or bare hex; throws Error{InvalidArgument}.
char32_t parse_codepoint(std::string_view text);

}  // namespace qaida
