#include "heliosweep/error.hpp"

namespace heliosweep {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::BadMagic: return "BadMagic";
    case Errc::UnsupportedVersion: return "UnsupportedVersion";
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::TruncatedPayload: return "TruncatedPayload";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::IoFailure: return "IoFailure";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::UnsupportedBitDepth: return "UnsupportedBitDepth";
    case Errc::UnsupportedColorType: return "UnsupportedColorType";
    case Errc::NoDiskFound: return "NoDiskFound";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::RecipeTextureMismatch: return "RecipeTextureMismatch";
    case Errc::EmptyDisk: return "EmptyDisk";
    case Errc::NeighbourUnavailable: return "NeighbourUnavailable";
    case Errc::MisalignedDisks: return "MisalignedDisks";
    case Errc::KernelTooLarge: return "KernelTooLarge";
    case Errc::TooFewPatches: return "TooFewPatches";
    case Errc::ZeroMaskPixel: return "ZeroMaskPixel";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::MisalignedPair: return "MisalignedPair";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MissingFile: return "MissingFile";
    case Errc::CorruptEntry: return "CorruptEntry";
    case Errc::UnknownMethod: return "UnknownMethod";
    case Errc::MissingMaskRun: return "MissingMaskRun";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace heliosweep
