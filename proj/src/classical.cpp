#include "heliosweep/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heliosweep/error.hpp"
#include "heliosweep/filters.hpp"

namespace heliosweep {
namespace {

CleanResult normalize_by(const SolarImage& cloudy, const Plane& transmittance) {
  const auto inside = cloudy.support();
  Plane cleaned(cloudy.width(), cloudy.height());
  const auto src = cloudy.pixels();
  const auto t = transmittance.data();
  auto dst = cleaned.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (inside[i]) dst[i] = std::clamp(static_cast<float>(static_cast<double>(src[i]) / t[i]), 0.0f, 1.0f);
  }
  return {ShadowMask(transmittance, cloudy.disk(), MaskKind::Transmittance), cloudy.with_pixels(std::move(cleaned))};
}

}  // namespace

CleanResult feng_transmittance(const SolarImage& cloudy, const std::optional<SolarImage>& neighbour,
                               const FengOptions& options) {
  if (!neighbour) throw Error(Errc::NeighbourUnavailable, "no cloud-free neighbour within the search window");
  const auto& a = cloudy.disk();
  const auto& b = neighbour->disk();
  if (!cloudy.plane().same_shape(neighbour->plane()) || std::hypot(a.cx - b.cx, a.cy - b.cy) > options.max_misalignment ||
      std::abs(a.radius - b.radius) > options.max_misalignment) {
    throw Error(Errc::MisalignedDisks, "cloudy image and neighbour are not disk-aligned");
  }

  const int radius = options.struct_radius > 0 ? options.struct_radius
                                               : std::max(1, static_cast<int>(a.radius / 16.0));
  const auto inside = cloudy.support();
  const Plane low_cloudy = masked_open(masked_close(cloudy.plane(), inside, radius), inside, radius);
  const Plane low_neighbour = masked_open(masked_close(neighbour->plane(), inside, radius), inside, radius);

  Plane t(cloudy.width(), cloudy.height(), 1.0f);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!inside[i]) continue;
    const double ratio = low_cloudy.data()[i] / std::max(static_cast<double>(low_neighbour.data()[i]), options.delta);
    t.data()[i] = static_cast<float>(std::clamp(ratio, options.t_min, 1.0));
  }
  return normalize_by(cloudy, t);
}

int fuller_default_k2(const DiskGeometry& disk) { return 2 * static_cast<int>(disk.radius / 8.0) + 1; }

CleanResult fuller_median(const SolarImage& cloudy, const FullerOptions& options) {
  const int k1 = options.k1;
  const int k2 = options.k2 > 0 ? options.k2 : std::max(fuller_default_k2(cloudy.disk()), k1 + 2);
  if (k1 < 1 || k1 % 2 == 0 || k2 % 2 == 0 || k1 >= k2) {
    throw Error(Errc::InvalidArgument, "median windows must be odd with k1 < k2 (got " + std::to_string(k1) + ", " +
                                           std::to_string(k2) + ")");
  }
  if (k2 > 2.0 * cloudy.disk().radius) throw Error(Errc::KernelTooLarge, "k2 exceeds the disk diameter");

  const auto inside = cloudy.support();
  const Plane local = masked_median(cloudy.plane(), inside, k1);
  Plane suppressed = cloudy.plane();
  for (std::size_t i = 0; i < suppressed.size(); ++i) {
    if (inside[i] && std::abs(suppressed.data()[i] - local.data()[i]) > options.structure_thresh) {
      suppressed.data()[i] = local.data()[i];
    }
  }
  const Plane field = masked_median(suppressed, inside, k2);
  const double reference = masked_quantile(field, inside, options.reference_quantile);

  Plane t(cloudy.width(), cloudy.height(), 1.0f);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!inside[i]) continue;
    const double ratio = reference > 0.0 ? field.data()[i] / reference : 1.0;
    t.data()[i] = static_cast<float>(std::clamp(ratio, options.t_min, 1.0));
  }
  return normalize_by(cloudy, t);
}

}  // namespace heliosweep
