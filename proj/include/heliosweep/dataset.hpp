#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "heliosweep/cloudsim.hpp"

namespace heliosweep {

enum class Split { Train, Val, Test };

std::string_view split_name(Split s) noexcept;
Split parse_split(std::string_view name);

struct SplitFractions {
  double train = 0.561;
  double val = 0.138;
  double test = 0.301;
};

struct SplitSizes {
  int train = 0;
  int val = 0;
  int test = 0;

  bool operator==(const SplitSizes&) const = default;
};

/// train = round(n * f_train), val = round(n * f_val), test = n - train - val.
/// Throws InvalidArgument for negative fractions or sizes that would not fit.
SplitSizes split_sizes(int n, const SplitFractions& fractions);

/// Split of each of `n` sorted items: a seeded shuffle, then the first `train` shuffled
/// positions go to Train and the next `val` to Val.
std::vector<Split> assign_splits(int n, std::uint64_t seed, const SplitFractions& fractions);

struct ManifestEntry {
  std::string id;
  Split split = Split::Train;
  std::uint64_t recipe_seed = 0;
  // Paths relative to the manifest's directory.
  std::string clean;
  std::string cloudy;
  std::string mask_residual;
  std::string mask_transmittance;
  std::string recipe;
  /// SHA-256 over the entry fields and the bytes of every referenced file.
  std::string checksum;
};

struct Manifest {
  std::filesystem::path root;  // directory holding manifest.jsonl
  std::vector<ManifestEntry> entries;  // sorted by id

  std::filesystem::path resolve(const std::string& relative) const { return root / relative; }
  std::vector<ManifestEntry> in_split(Split s) const;
};

struct DatasetOptions {
  std::uint64_t seed = 0;
  SplitFractions fractions;
  TextureKind texture_kind = TextureKind::Fluffy;
  TextureOptions texture;
  CompositeOptions composite;
  /// Cloud realizations per clean image; all of them share the source image's split.
  int repeats = 1;
  int jobs = 1;
};

inline constexpr std::string_view kManifestName = "manifest.jsonl";

/// Composites every *.solc image of `clean_dir` and writes, under `out_dir`:
/// clean/, cloudy/, masks/residual/, masks/transmittance/, recipes/ and manifest.jsonl.
/// Throws EmptyInput when `clean_dir` holds no images.
Manifest build_dataset(const std::filesystem::path& clean_dir, const std::filesystem::path& out_dir,
                       const DatasetOptions& options);

/// Parses and verifies a manifest: every referenced file must exist (MissingFile), match
/// its checksum and hold a valid object of the expected kind (CorruptEntry).
Manifest load_manifest(const std::filesystem::path& path);

/// Canonical checksum of an entry given its current field values and files on disk.
std::string entry_checksum(const ManifestEntry& entry, const std::filesystem::path& root);

}  // namespace heliosweep
