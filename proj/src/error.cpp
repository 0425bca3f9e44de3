#include "qaida/error.hpp"

namespace qaida {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NotAFont: return "NotAFont";
    case Errc::MissingTable: return "MissingTable";
    case Errc::MalformedTable: return "MalformedTable";
    case Errc::Unmapped: return "Unmapped";
    case Errc::MalformedGlyph: return "MalformedGlyph";
    case Errc::EmptyResult: return "EmptyResult";
    case Errc::EmptyWord: return "EmptyWord";
    case Errc::InvalidLigature: return "InvalidLigature";
    case Errc::NoPresentationForm: return "NoPresentationForm";
    case Errc::UnmappedForm: return "UnmappedForm";
    case Errc::EmptyRun: return "EmptyRun";
    case Errc::OddDimensions: return "OddDimensions";
    case Errc::InvalidUtf8: return "InvalidUtf8";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::NTooLarge: return "NTooLarge";
    case Errc::TooFewFonts: return "TooFewFonts";
    case Errc::IoFailure: return "IoFailure";
    case Errc::AllPairsSkipped: return "AllPairsSkipped";
    case Errc::ManifestMissing: return "ManifestMissing";
    case Errc::EmptySplit: return "EmptySplit";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace qaida
