#include "heliosweep/coverage.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "heliosweep/container.hpp"
#include "heliosweep/error.hpp"

namespace heliosweep {

double coverage_level(const SolarImage& image) {
  std::array<double, 4> sum{};
  std::array<std::size_t, 4> count{};
  const auto& disk = image.disk();
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!disk.contains(x, y)) continue;
      const int q = (x >= disk.cx ? 1 : 0) + (y >= disk.cy ? 2 : 0);
      sum[q] += image(x, y);
      ++count[q];
    }
  }
  if (std::any_of(count.begin(), count.end(), [](std::size_t c) { return c == 0; })) {
    throw Error(Errc::EmptyDisk, "a disk quadrant holds no pixels");
  }

  std::array<double, 4> means{};
  for (int q = 0; q < 4; ++q) means[q] = sum[q] / static_cast<double>(count[q]);
  const double mean = (means[0] + means[1] + means[2] + means[3]) / 4.0;
  if (mean <= 0.0) return 0.0;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  return std::sqrt(var / 4.0) / mean;
}

std::vector<std::filesystem::path> list_containers(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::IoFailure, dir.string() + " is not a directory");
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".solc") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

TriageResult triage(const std::filesystem::path& dir, double threshold) {
  TriageResult result;
  for (const auto& path : list_containers(dir)) {
    const double score = coverage_level(read_image(path));
    (score <= threshold ? result.cloudfree : result.cloudy).push_back({path, score});
  }
  return result;
}

}  // namespace heliosweep
