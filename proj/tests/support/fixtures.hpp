#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <unistd.h>
#include <vector>

#include "heliosweep/container.hpp"
#include "heliosweep/image.hpp"
#include "heliosweep/synthetic_sun.hpp"

namespace heliosweep::testing {

/// Disk image whose in-disk pixels are fn(x, y, disk); zero elsewhere.
template <typename Fn>
SolarImage disk_image(int size, double radius_fraction, Fn&& fn, Modality m = Modality::Unspecified) {
  const DiskGeometry d = centered_disk(size, radius_fraction);
  Plane p(size, size);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (d.contains(x, y)) p(x, y) = static_cast<float>(fn(x, y, d));
    }
  }
  return SolarImage(std::move(p), d, m);
}

inline SolarImage uniform_disk(int size, double radius_fraction, double value) {
  return disk_image(size, radius_fraction, [value](int, int, const DiskGeometry&) { return value; });
}

/// Distance of (x, y) from the disk center relative to the radius.
inline double radial(const DiskGeometry& d, int x, int y) {
  return std::hypot(x - d.cx, y - d.cy) / d.radius;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "hs") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

/// Writes `count` synthetic clean images sun_000.solc ... into `dir`.
inline void write_suns(const std::filesystem::path& dir, int count, int size, std::uint64_t seed = 1) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "sun_%03d.solc", i);
    write_container(synthesize_sun(seed * 1000 + static_cast<std::uint64_t>(i), {.size = size}), dir / name);
  }
}

}  // namespace heliosweep::testing
