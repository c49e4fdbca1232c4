#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace heliosweep {

enum class Modality : std::uint32_t { CaII = 0, HAlpha = 1, Unspecified = 2 };

enum class MaskKind : std::uint32_t { Transmittance = 1, Residual = 2 };

std::string_view modality_name(Modality m) noexcept;
Modality parse_modality(std::string_view name);

/// Solar disk on the pixel grid. Pixel (x, y) has its center at (x, y).
struct DiskGeometry {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;

  bool contains(double x, double y) const noexcept {
    const double dx = x - cx;
    const double dy = y - cy;
    return dx * dx + dy * dy <= radius * radius;
  }

  /// Geometry rounded to the 32-bit precision the container stores.
  DiskGeometry quantized() const noexcept {
    return {static_cast<float>(cx), static_cast<float>(cy), static_cast<float>(radius)};
  }

  bool operator==(const DiskGeometry&) const = default;
};

/// Disk centered in a `size`-square frame with radius `radius_fraction * size / 2`.
DiskGeometry centered_disk(int size, double radius_fraction);

/// Geometry that covers the whole frame; used for images that were never preprocessed.
DiskGeometry full_frame_disk(int width, int height);

/// Row-major float raster. The mutable working buffer behind every image type.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, float fill = 0.0f);
  Plane(int width, int height, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  float& operator()(int x, int y) noexcept { return data_[index(x, y)]; }
  float operator()(int x, int y) const noexcept { return data_[index(x, y)]; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Plane&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

/// One byte per pixel, 1 where the pixel center lies inside the disk.
std::vector<std::uint8_t> disk_support(int width, int height, const DiskGeometry& disk);

/// Grayscale full-disk image with intensities in [0, 1]. Immutable once built.
class SolarImage {
 public:
  SolarImage() = default;
  SolarImage(Plane plane, DiskGeometry disk, Modality modality = Modality::Unspecified);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  float operator()(int x, int y) const noexcept { return plane_(x, y); }
  const Plane& plane() const noexcept { return plane_; }
  std::span<const float> pixels() const noexcept { return plane_.data(); }
  const DiskGeometry& disk() const noexcept { return disk_; }
  Modality modality() const noexcept { return modality_; }
  std::vector<std::uint8_t> support() const { return disk_support(width(), height(), disk_); }

  /// Same geometry and modality, new pixels.
  SolarImage with_pixels(Plane plane) const;

  /// Throws InvariantViolation when a pixel leaves [0, 1] or the background is not zero.
  void validate() const;

  bool operator==(const SolarImage&) const = default;

 private:
  Plane plane_;
  DiskGeometry disk_;
  Modality modality_ = Modality::Unspecified;
};

class ShadowMask {
 public:
  ShadowMask() = default;
  ShadowMask(Plane plane, DiskGeometry disk, MaskKind kind);

  int width() const noexcept { return plane_.width(); }
  int height() const noexcept { return plane_.height(); }
  float operator()(int x, int y) const noexcept { return plane_(x, y); }
  const Plane& plane() const noexcept { return plane_; }
  std::span<const float> pixels() const noexcept { return plane_.data(); }
  const DiskGeometry& disk() const noexcept { return disk_; }
  MaskKind kind() const noexcept { return kind_; }
  std::vector<std::uint8_t> support() const { return disk_support(width(), height(), disk_); }

  /// Transmittance masks must lie in [0, 1]; residual masks must be >= 0 in the disk and 0 outside.
  void validate() const;

  bool operator==(const ShadowMask&) const = default;

 private:
  Plane plane_;
  DiskGeometry disk_;
  MaskKind kind_ = MaskKind::Transmittance;
};

}  // namespace heliosweep
