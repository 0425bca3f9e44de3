#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qaida {

enum class Errc {
  // font_store
  NotAFont,
  MissingTable,
  MalformedTable,
  Unmapped,
  MalformedGlyph,
  EmptyResult,
  // shaping
  EmptyWord,
  InvalidLigature,
  NoPresentationForm,
  // raster
  UnmappedForm,
  EmptyRun,
  OddDimensions,
  // corpus
  InvalidUtf8,
  KTooLarge,
  NTooLarge,
  // dataset
  TooFewFonts,
  IoFailure,
  AllPairsSkipped,
  ManifestMissing,
  // metrics
  EmptySplit,
  // shared
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` identifies the failure
/// class so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qaida
