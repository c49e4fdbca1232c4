#pragma once

#include <cstdint>
#include <json.hpp>
#include <string_view>
#include <vector>

#include "heliosweep/image.hpp"

namespace heliosweep {

enum class TextureKind { Fluffy, Streaked };

std::string_view texture_kind_name(TextureKind kind) noexcept;
TextureKind parse_texture_kind(std::string_view name);

struct TextureOptions {
  int octaves = 5;
  double persistence = 0.5;
  /// Lattice cells across the texture at the coarsest octave.
  int base_cells = 4;
  /// Streaked only: shear of the streaks away from the vertical, in degrees.
  double shear_deg = 0.0;
};

/// Tileable fractal value noise rescaled to [0, 1]. Streaked textures vary only along x
/// (before shear). Throws InvalidArgument for size < 64.
Plane make_base_texture(TextureKind kind, int size, std::uint64_t seed, const TextureOptions& options = {});

/// Base texture side needed so every duplicate (scaled down to 50%) still covers a frame.
constexpr int texture_size_for(int frame_size) noexcept { return 2 * frame_size; }

struct CloudDuplicate {
  double scale_x = 1.0;  // [0.5, 1]
  double scale_y = 1.0;  // [0.5, 1]
  bool flip_x = false;
  bool flip_y = false;
  double alpha = 0.0;     // [0.1, 0.4]
  double offset_x = 0.0;  // fraction of the resized width, [0, 1)
  double offset_y = 0.0;

  bool operator==(const CloudDuplicate&) const = default;
};

struct CloudRecipe {
  std::uint64_t seed = 0;
  TextureKind texture_kind = TextureKind::Fluffy;
  std::vector<CloudDuplicate> duplicates;

  bool operator==(const CloudRecipe&) const = default;
};

/// 2 or 3 duplicates with independent resize, flip (x, y or both), transparency and offset.
CloudRecipe sample_recipe(std::uint64_t seed, TextureKind kind = TextureKind::Fluffy);

nlohmann::json recipe_to_json(const CloudRecipe& recipe);
CloudRecipe recipe_from_json(const nlohmann::json& j);

struct CloudField {
  Plane attenuation;  // A(x, y) in [0, a_max], zero outside the disk
  double a_max = 0.9;
};

struct CompositeOptions {
  double a_max = 0.9;
};

struct CompositeResult {
  SolarImage cloudy;
  ShadowMask gt_residual;
  ShadowMask gt_transmittance;
  CloudField field;
};

/// Sum of the recipe's weighted duplicates, clipped to [0, a_max] and masked to the disk.
CloudField cloud_field(const DiskGeometry& disk, int width, int height, const CloudRecipe& recipe,
                       const Plane& texture, const CompositeOptions& options = {});

/// cloudy = clean * (1 - A). The removed intensity is rounded to the clean pixel's float
/// spacing so that cloudy + gt_residual == clean holds without rounding error.
CompositeResult composite(const SolarImage& clean, const CloudRecipe& recipe, const Plane& texture,
                          const CompositeOptions& options = {});

}  // namespace heliosweep
