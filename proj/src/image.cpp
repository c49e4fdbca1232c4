#include "heliosweep/image.hpp"

#include <cmath>
#include <string>

#include "heliosweep/error.hpp"

namespace heliosweep {

std::string_view modality_name(Modality m) noexcept {
  switch (m) {
    case Modality::CaII: return "caii";
    case Modality::HAlpha: return "halpha";
    case Modality::Unspecified: return "unspecified";
  }
  return "unspecified";
}

Modality parse_modality(std::string_view name) {
  if (name == "caii") return Modality::CaII;
  if (name == "halpha") return Modality::HAlpha;
  if (name == "unspecified") return Modality::Unspecified;
  throw Error(Errc::InvalidArgument, "unknown modality '" + std::string(name) + "'");
}

DiskGeometry centered_disk(int size, double radius_fraction) {
  const double c = (size - 1) / 2.0;
  return DiskGeometry{c, c, radius_fraction * size / 2.0}.quantized();
}

DiskGeometry full_frame_disk(int width, int height) {
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;
  return DiskGeometry{cx, cy, std::hypot(cx, cy) + 1.0}.quantized();
}

Plane::Plane(int width, int height, float fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
  if (width < 0 || height < 0) throw Error(Errc::InvalidArgument, "negative plane dimensions");
}

Plane::Plane(int width, int height, std::vector<float> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0 ||
      data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::ShapeMismatch, "pixel buffer does not match plane dimensions");
  }
}

std::vector<std::uint8_t> disk_support(int width, int height, const DiskGeometry& disk) {
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(width) * height, 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      inside[static_cast<std::size_t>(y) * width + x] = disk.contains(x, y) ? 1 : 0;
    }
  }
  return inside;
}

SolarImage::SolarImage(Plane plane, DiskGeometry disk, Modality modality)
    : plane_(std::move(plane)), disk_(disk.quantized()), modality_(modality) {}

SolarImage SolarImage::with_pixels(Plane plane) const {
  if (!plane.same_shape(plane_)) throw Error(Errc::ShapeMismatch, "replacement plane has a different shape");
  return SolarImage(std::move(plane), disk_, modality_);
}

void SolarImage::validate() const {
  if (!(disk_.radius > 0.0)) throw Error(Errc::InvariantViolation, "disk radius must be positive");
  const auto inside = support();
  const auto px = pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const float v = px[i];
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "pixel " + std::to_string(i));
    if (v < 0.0f || v > 1.0f) {
      throw Error(Errc::InvariantViolation, "pixel " + std::to_string(i) + " outside [0, 1]");
    }
    if (!inside[i] && v != 0.0f) {
      throw Error(Errc::InvariantViolation, "background pixel " + std::to_string(i) + " is not zero");
    }
  }
}

ShadowMask::ShadowMask(Plane plane, DiskGeometry disk, MaskKind kind)
    : plane_(std::move(plane)), disk_(disk.quantized()), kind_(kind) {}

void ShadowMask::validate() const {
  const auto inside = support();
  const auto px = pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const float v = px[i];
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "mask pixel " + std::to_string(i));
    if (kind_ == MaskKind::Transmittance) {
      if (v < 0.0f || v > 1.0f) {
        throw Error(Errc::InvariantViolation,
                    "transmittance pixel " + std::to_string(i) + " outside [0, 1]");
      }
    } else if (inside[i] ? v < 0.0f : v != 0.0f) {
      throw Error(Errc::InvariantViolation, "residual pixel " + std::to_string(i) +
                                                (inside[i] ? " is negative" : " is nonzero outside the disk"));
    }
  }
}

}  // namespace heliosweep
