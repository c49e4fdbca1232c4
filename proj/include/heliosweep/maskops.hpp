#pragma once

#include "heliosweep/image.hpp"

namespace heliosweep {

inline constexpr double kDefaultEpsilon = 1e-5;
inline constexpr double kDefaultCleanFloor = 0.02;

/// img / mask. Throws ZeroMaskPixel if the mask is <= 0 anywhere in the disk.
SolarImage apply_shadow_ratio(const SolarImage& image, const ShadowMask& mask);

/// img / (mask + epsilon); no precondition on mask zeros.
SolarImage apply_division(const SolarImage& image, const ShadowMask& mask, double epsilon = kDefaultEpsilon);

/// img + mask (residual kind only).
SolarImage apply_residual(const SolarImage& image, const ShadowMask& mask);

/// Ground-truth mask from an aligned clean/cloudy pair. Residual: clean - cloudy, floored at 0.
/// Transmittance: cloudy / clean where clean > clean_floor, 1 elsewhere and outside the disk.
ShadowMask derive_gt_mask(const SolarImage& clean, const SolarImage& cloudy, MaskKind kind,
                          double clean_floor = kDefaultCleanFloor);

/// |d(img / (mask + epsilon)) / d mask|, the per-pixel gradient scale of the division path.
constexpr double division_sensitivity(double image, double mask, double epsilon = kDefaultEpsilon) {
  return image / ((mask + epsilon) * (mask + epsilon));
}

}  // namespace heliosweep
