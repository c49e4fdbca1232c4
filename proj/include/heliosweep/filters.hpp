#pragma once

#include <cstdint>
#include <span>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// Median over the in-support pixels of a `window`x`window` neighbourhood (window odd).
/// Even counts average the two central values. Out-of-support output pixels are 0.
/// Sliding rank histogram, O(window) per pixel.
Plane masked_median(const Plane& in, std::span<const std::uint8_t> support, int window);

/// Grayscale erosion / dilation with a disk structuring element, ignoring pixels
/// outside the support.
Plane masked_erode(const Plane& in, std::span<const std::uint8_t> support, int radius);
Plane masked_dilate(const Plane& in, std::span<const std::uint8_t> support, int radius);

Plane masked_close(const Plane& in, std::span<const std::uint8_t> support, int radius);
Plane masked_open(const Plane& in, std::span<const std::uint8_t> support, int radius);

/// Quantile (linear interpolation between order statistics) of the in-support values.
double masked_quantile(const Plane& in, std::span<const std::uint8_t> support, double q);

}  // namespace heliosweep
