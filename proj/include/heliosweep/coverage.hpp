#pragma once

#include <filesystem>
#include <vector>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// Coefficient of variation (population std / mean) of the four in-disk quadrant means,
/// quadrants split at the disk center. 0 for quadrant-symmetric images.
double coverage_level(const SolarImage& image);

struct TriageEntry {
  std::filesystem::path path;
  double score = 0.0;
};

struct TriageResult {
  std::vector<TriageEntry> cloudfree;  // score <= threshold
  std::vector<TriageEntry> cloudy;     // score > threshold
};

/// Scores every container image (*.solc) in `dir`, in file-name order.
TriageResult triage(const std::filesystem::path& dir, double threshold = 0.05);

/// Sorted *.solc files of a directory (empty when the directory has none).
std::vector<std::filesystem::path> list_containers(const std::filesystem::path& dir);

}  // namespace heliosweep
