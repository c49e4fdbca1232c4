#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace heliosweep {

enum class Errc {
  BadMagic,
  UnsupportedVersion,
  MalformedHeader,
  TruncatedPayload,
  NonFiniteValue,
  IoFailure,
  InvariantViolation,
  UnsupportedBitDepth,
  UnsupportedColorType,
  NoDiskFound,
  DegenerateGeometry,
  RecipeTextureMismatch,
  EmptyDisk,
  NeighbourUnavailable,
  MisalignedDisks,
  KernelTooLarge,
  TooFewPatches,
  ZeroMaskPixel,
  KindMismatch,
  MisalignedPair,
  ShapeMismatch,
  EmptyInput,
  MissingFile,
  CorruptEntry,
  UnknownMethod,
  MissingMaskRun,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace heliosweep
