#pragma once

#include <filesystem>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// Imports a 16-bit single-channel PNG, mapping v to v / 65535. The returned image
/// carries a frame-covering disk until it is preprocessed.
SolarImage import_png16(const std::filesystem::path& path);

/// Quantizes with round(v * 65535) after clamping to [0, 1].
void export_png16(const Plane& plane, const std::filesystem::path& path);
inline void export_png16(const SolarImage& image, const std::filesystem::path& path) {
  export_png16(image.plane(), path);
}

/// 8-bit preview, values clamped to [0, 1].
void export_png8(const Plane& plane, const std::filesystem::path& path);

}  // namespace heliosweep
