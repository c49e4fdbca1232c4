#include "heliosweep/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

void require_kind(const ShadowMask& mask, MaskKind kind) {
  if (mask.kind() != kind) {
    throw Error(Errc::KindMismatch, kind == MaskKind::Residual ? "expected a residual mask" : "expected a transmittance mask");
  }
}

void require_shape(const SolarImage& image, const ShadowMask& mask) {
  if (!image.plane().same_shape(mask.plane())) throw Error(Errc::ShapeMismatch, "image and mask sizes differ");
}

template <typename F>
SolarImage map_in_disk(const SolarImage& image, F f) {
  Plane out(image.width(), image.height());
  const auto inside = image.support();
  const auto src = image.pixels();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (inside[i]) dst[i] = std::clamp(f(i), 0.0f, 1.0f);
  }
  return image.with_pixels(std::move(out));
}

}  // namespace

SolarImage apply_shadow_ratio(const SolarImage& image, const ShadowMask& mask) {
  require_kind(mask, MaskKind::Transmittance);
  require_shape(image, mask);
  const auto inside = image.support();
  const auto m = mask.pixels();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (inside[i] && !(m[i] > 0.0f)) throw Error(Errc::ZeroMaskPixel, "mask pixel " + std::to_string(i) + " is not positive");
  }
  const auto px = image.pixels();
  return map_in_disk(image, [&](std::size_t i) { return static_cast<float>(static_cast<double>(px[i]) / m[i]); });
}

SolarImage apply_division(const SolarImage& image, const ShadowMask& mask, double epsilon) {
  require_kind(mask, MaskKind::Transmittance);
  require_shape(image, mask);
  const auto px = image.pixels();
  const auto m = mask.pixels();
  return map_in_disk(image, [&](std::size_t i) {
    const double denom = static_cast<double>(m[i]) + epsilon;
    if (denom <= 0.0) return px[i] > 0.0f ? 1.0f : 0.0f;
    return static_cast<float>(px[i] / denom);
  });
}

SolarImage apply_residual(const SolarImage& image, const ShadowMask& mask) {
  require_kind(mask, MaskKind::Residual);
  require_shape(image, mask);
  const auto px = image.pixels();
  const auto m = mask.pixels();
  return map_in_disk(image, [&](std::size_t i) { return px[i] + m[i]; });
}

ShadowMask derive_gt_mask(const SolarImage& clean, const SolarImage& cloudy, MaskKind kind, double clean_floor) {
  if (!clean.plane().same_shape(cloudy.plane()) || clean.disk() != cloudy.disk()) {
    throw Error(Errc::MisalignedPair, "clean and cloudy images are not aligned");
  }
  const auto inside = clean.support();
  const auto c = clean.pixels();
  const auto y = cloudy.pixels();
  Plane out(clean.width(), clean.height(), kind == MaskKind::Transmittance ? 1.0f : 0.0f);
  auto dst = out.data();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!inside[i]) continue;
    if (kind == MaskKind::Residual) {
      dst[i] = std::max(c[i] - y[i], 0.0f);
    } else if (c[i] > clean_floor) {
      dst[i] = std::clamp(static_cast<float>(static_cast<double>(y[i]) / c[i]), 0.0f, 1.0f);
    }
  }
  return ShadowMask(std::move(out), clean.disk(), kind);
}

}  // namespace heliosweep
