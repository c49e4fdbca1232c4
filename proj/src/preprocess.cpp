#include "heliosweep/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

float sample_bilinear(const Plane& plane, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double tx = x - fx;
  const double ty = y - fy;
  auto at = [&](int xi, int yi) -> double {
    if (xi < 0 || yi < 0 || xi >= plane.width() || yi >= plane.height()) return 0.0;
    return plane(xi, yi);
  };
  if (tx == 0.0 && ty == 0.0) return static_cast<float>(at(x0, y0));
  const double top = at(x0, y0) * (1.0 - tx) + at(x0 + 1, y0) * tx;
  const double bottom = at(x0, y0 + 1) * (1.0 - tx) + at(x0 + 1, y0 + 1) * tx;
  return static_cast<float>(top * (1.0 - ty) + bottom * ty);
}

}  // namespace

DiskGeometry detect_disk(const SolarImage& image, double threshold_quantile) {
  const auto px = image.pixels();
  std::vector<float> nonzero;
  nonzero.reserve(px.size());
  for (float v : px) {
    if (v > 0.0f) nonzero.push_back(v);
  }
  const std::size_t min_count = std::max<std::size_t>(1, px.size() / 100);
  if (nonzero.size() < min_count) throw Error(Errc::NoDiskFound, "image is (nearly) empty");

  const auto peak_pos = nonzero.begin() + static_cast<std::ptrdiff_t>(0.99 * (nonzero.size() - 1));
  std::nth_element(nonzero.begin(), peak_pos, nonzero.end());
  const double threshold = threshold_quantile * static_cast<double>(*peak_pos);

  double sum_x = 0.0;
  double sum_y = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image(x, y) > 0.0f && image(x, y) >= threshold) {
        sum_x += x;
        sum_y += y;
        ++count;
      }
    }
  }
  if (count < min_count) throw Error(Errc::NoDiskFound, "fewer than 1% of pixels above threshold");
  return {sum_x / count, sum_y / count, std::sqrt(static_cast<double>(count) / std::numbers::pi)};
}

SolarImage normalize_disk(const SolarImage& image, const DiskGeometry& geometry, int out_size,
                          double target_radius_fraction) {
  if (geometry.radius < 4.0) throw Error(Errc::DegenerateGeometry, "disk radius below 4 px");
  if (out_size < 8) throw Error(Errc::InvalidArgument, "output size below 8 px");
  if (!(target_radius_fraction > 0.0 && target_radius_fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "target radius fraction must lie in (0, 1]");
  }

  const DiskGeometry target = centered_disk(out_size, target_radius_fraction);
  const double scale = geometry.radius / target.radius;
  Plane out(out_size, out_size);
  for (int y = 0; y < out_size; ++y) {
    for (int x = 0; x < out_size; ++x) {
      if (!target.contains(x, y)) continue;
      const double sx = geometry.cx + (x - target.cx) * scale;
      const double sy = geometry.cy + (y - target.cy) * scale;
      out(x, y) = std::clamp(sample_bilinear(image.plane(), sx, sy), 0.0f, 1.0f);
    }
  }
  return SolarImage(std::move(out), target, image.modality());
}

SolarImage preprocess(const SolarImage& image, const PreprocessOptions& options) {
  const DiskGeometry geometry = detect_disk(image, options.threshold_quantile);
  return normalize_disk(image, geometry, options.out_size, options.target_radius_fraction);
}

}  // namespace heliosweep
