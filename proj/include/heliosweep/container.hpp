#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include "heliosweep/image.hpp"

namespace heliosweep {

/// On-disk layout, little-endian:
///   "SOLC" 00 00 00 01 | u32 kind | u32 width | u32 height | f32 cx | f32 cy | f32 radius |
///   u32 modality | width*height f32 row-major.
/// kind: 0 image, 1 transmittance mask, 2 residual mask.
inline constexpr std::size_t kContainerHeaderBytes = 36;

using ContainerObject = std::variant<SolarImage, ShadowMask>;

std::vector<unsigned char> encode_container(const SolarImage& image);
std::vector<unsigned char> encode_container(const ShadowMask& mask);
ContainerObject decode_container(std::span<const unsigned char> bytes);

ContainerObject read_container(const std::filesystem::path& path);
SolarImage read_image(const std::filesystem::path& path);
ShadowMask read_mask(const std::filesystem::path& path);

/// Validates the object's invariants before writing.
void write_container(const SolarImage& image, const std::filesystem::path& path);
void write_container(const ShadowMask& mask, const std::filesystem::path& path);

}  // namespace heliosweep
