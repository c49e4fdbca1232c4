#pragma once

#include <optional>

#include "heliosweep/image.hpp"

namespace heliosweep {

struct CleanResult {
  ShadowMask mask;  // transmittance estimate
  SolarImage cleaned;
};

struct FengOptions {
  /// Structuring element radius; 0 selects disk_radius / 16.
  int struct_radius = 0;
  double delta = 1e-4;
  double t_min = 0.05;
  /// Largest center offset (px) tolerated between the cloudy image and its neighbour.
  double max_misalignment = 0.5;
};

/// Transmittance from a cloud-free temporal neighbour: t = clip(L(cloudy) / max(L(neighbour), delta), t_min, 1)
/// with L = morphological closing then opening (disk element). cleaned = clip(cloudy / t, 0, 1).
/// Throws NeighbourUnavailable when no neighbour is given, MisalignedDisks when the disks differ.
CleanResult feng_transmittance(const SolarImage& cloudy, const std::optional<SolarImage>& neighbour,
                               const FengOptions& options = {});

struct FullerOptions {
  int k1 = 9;
  /// Second-stage window; 0 selects 2 * floor(disk_radius / 8) + 1, at least k1 + 2.
  int k2 = 0;
  double structure_thresh = 0.08;
  double t_min = 0.05;
  /// In-disk quantile of the cloud field taken as the unobscured level.
  double reference_quantile = 0.98;
};

int fuller_default_k2(const DiskGeometry& disk);

/// Two-stage median filtering. Stage 1 (window k1) replaces pixels deviating from the local
/// median by more than structure_thresh; stage 2 (window k2) yields the cloud field F.
/// t = clip(F / reference, t_min, 1), cleaned = clip(cloudy / t, 0, 1).
CleanResult fuller_median(const SolarImage& cloudy, const FullerOptions& options = {});

}  // namespace heliosweep
