#pragma once

#include "heliosweep/image.hpp"

namespace heliosweep {

struct PreprocessOptions {
  int out_size = 512;
  double target_radius_fraction = 0.45;
  /// Fraction of the bright-disk level (99th percentile of nonzero pixels) used as the
  /// disk/background threshold.
  double threshold_quantile = 0.5;
};

/// Centroid and equal-area radius of the pixels at or above the threshold.
/// Throws NoDiskFound when fewer than 1% of the frame passes.
DiskGeometry detect_disk(const SolarImage& image, double threshold_quantile = 0.5);

/// Resamples (bilinear) so the disk sits at the frame center with radius
/// `target_radius_fraction * out_size / 2`, zeroing everything outside it.
SolarImage normalize_disk(const SolarImage& image, const DiskGeometry& geometry, int out_size,
                          double target_radius_fraction);

SolarImage preprocess(const SolarImage& image, const PreprocessOptions& options = {});

}  // namespace heliosweep
