#pragma once

#include <cstdint>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// Parameters of a procedural chromospheric full-disk image, used where real
/// observations are unavailable (demos, tests, benchmarks).
struct SunOptions {
  int size = 512;
  double radius_fraction = 0.45;
  Modality modality = Modality::CaII;
  double center_intensity = 0.85;
  double limb_darkening = 0.4;
  int plages = 12;
  int filaments = 8;
  double granulation = 0.015;
};

/// Clean, preprocessed-looking disk: limb darkening, bright plages (stronger in Ca II),
/// dark filaments (stronger in H-alpha) and fine texture. Background is exactly zero.
SolarImage synthesize_sun(std::uint64_t seed, const SunOptions& options = {});

/// The same Sun observed a few hours apart: structures keep their layout but their
/// amplitudes drift by `drift` (relative) and the fine texture is redrawn.
SolarImage synthesize_neighbour(std::uint64_t seed, const SunOptions& options = {}, double drift = 0.05);

}  // namespace heliosweep
