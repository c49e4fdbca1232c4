#include "heliosweep/synthetic_sun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heliosweep/rng.hpp"

namespace heliosweep {
namespace {

struct Blob {
  double x, y, sigma, amplitude;
};

struct Filament {
  double x, y, angle, length, width, curvature, amplitude;
};

SolarImage render(std::uint64_t seed, std::uint64_t texture_seed, const SunOptions& o, double drift) {
  const DiskGeometry disk = centered_disk(o.size, o.radius_fraction);
  Rng layout(seed);
  Rng jitter(derive_seed(texture_seed, 17));

  const bool caii = o.modality != Modality::HAlpha;
  const double plage_gain = caii ? 0.18 : 0.08;
  const double filament_gain = caii ? 0.12 : 0.35;

  auto in_disk_point = [&](double max_fraction) {
    while (true) {
      const double px = layout.uniform(-1.0, 1.0);
      const double py = layout.uniform(-1.0, 1.0);
      if (px * px + py * py <= max_fraction * max_fraction) {
        return std::pair{disk.cx + px * disk.radius, disk.cy + py * disk.radius};
      }
    }
  };

  std::vector<Blob> blobs;
  for (int i = 0; i < o.plages; ++i) {
    const auto [x, y] = in_disk_point(0.85);
    const double sigma = layout.uniform(0.015, 0.06) * disk.radius;
    const double amp = plage_gain * layout.uniform(0.4, 1.0);
    blobs.push_back({x, y, sigma, amp * (1.0 + drift * jitter.uniform(-1.0, 1.0))});
  }
  std::vector<Filament> filaments;
  for (int i = 0; i < o.filaments; ++i) {
    const auto [x, y] = in_disk_point(0.8);
    const double amp = filament_gain * layout.uniform(0.5, 1.0);
    filaments.push_back({x, y, layout.uniform(0.0, std::numbers::pi), layout.uniform(0.05, 0.25) * disk.radius,
                         layout.uniform(0.006, 0.015) * disk.radius, layout.uniform(-0.004, 0.004),
                         amp * (1.0 + drift * jitter.uniform(-1.0, 1.0))});
  }

  // Fine texture: two octaves of hashed lattice noise.
  Rng grain_rng(derive_seed(texture_seed, 29));
  const int cells = std::max(8, o.size / 6);
  std::vector<double> grain(static_cast<std::size_t>(cells) * cells);
  for (double& g : grain) g = grain_rng.uniform(-1.0, 1.0);
  auto grain_at = [&](double u, double v) {
    const int i = static_cast<int>(u) % cells;
    const int j = static_cast<int>(v) % cells;
    const double fu = u - std::floor(u);
    const double fv = v - std::floor(v);
    auto g = [&](int a, int b) { return grain[static_cast<std::size_t>(b % cells) * cells + (a % cells)]; };
    const double top = g(i, j) * (1 - fu) + g(i + 1, j) * fu;
    const double bottom = g(i, j + 1) * (1 - fu) + g(i + 1, j + 1) * fu;
    return top * (1 - fv) + bottom * fv;
  };

  Plane plane(o.size, o.size);
  const double grain_step = static_cast<double>(cells) / o.size;
  for (int y = 0; y < o.size; ++y) {
    for (int x = 0; x < o.size; ++x) {
      if (!disk.contains(x, y)) continue;
      const double dx = (x - disk.cx) / disk.radius;
      const double dy = (y - disk.cy) / disk.radius;
      const double mu = std::sqrt(std::max(0.0, 1.0 - dx * dx - dy * dy));
      double v = o.center_intensity * (1.0 - o.limb_darkening * (1.0 - mu));

      for (const auto& b : blobs) {
        const double r2 = ((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (2.0 * b.sigma * b.sigma);
        if (r2 < 12.0) v += b.amplitude * std::exp(-r2);
      }
      for (const auto& f : filaments) {
        const double c = std::cos(f.angle);
        const double s = std::sin(f.angle);
        const double along = (x - f.x) * c + (y - f.y) * s;
        if (std::abs(along) > f.length) continue;
        const double across = -(x - f.x) * s + (y - f.y) * c - f.curvature * along * along;
        const double taper = 1.0 - (along / f.length) * (along / f.length);
        const double w = f.width * (0.5 + 0.5 * taper);
        v -= f.amplitude * taper * std::exp(-(across * across) / (2.0 * w * w));
      }
      v += o.granulation * (grain_at(x * grain_step, y * grain_step) +
                            0.5 * grain_at(x * grain_step * 2.0 + 0.37, y * grain_step * 2.0 + 0.61));
      plane(x, y) = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  }
  return SolarImage(std::move(plane), disk, o.modality);
}

}  // namespace

SolarImage synthesize_sun(std::uint64_t seed, const SunOptions& options) {
  return render(seed, seed, options, 0.0);
}

SolarImage synthesize_neighbour(std::uint64_t seed, const SunOptions& options, double drift) {
  return render(seed, derive_seed(seed, 0x6e65696768ULL), options, drift);
}

}  // namespace heliosweep
