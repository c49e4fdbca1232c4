#include "heliosweep/container.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

constexpr std::array<unsigned char, 4> kMagic{'S', 'O', 'L', 'C'};
constexpr std::array<unsigned char, 4> kVersion{0, 0, 0, 1};

class Writer {
 public:
  explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

  template <typename T>
  void put(T value) {
    const auto raw = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    bytes_.insert(bytes_.end(), raw.begin(), raw.end());
  }

  void put_bytes(std::span<const unsigned char> raw) { bytes_.insert(bytes_.end(), raw.begin(), raw.end()); }

  std::vector<unsigned char> take() { return std::move(bytes_); }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw Error(Errc::TruncatedPayload, "header ends early");
    std::array<unsigned char, sizeof(T)> raw;
    std::memcpy(raw.data(), bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return std::bit_cast<T>(raw);
  }

  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  const unsigned char* cursor() const noexcept { return bytes_.data() + pos_; }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> encode(std::uint32_t kind, const Plane& plane, const DiskGeometry& disk,
                                  std::uint32_t modality) {
  Writer w(kContainerHeaderBytes + plane.size() * sizeof(float));
  w.put_bytes(kMagic);
  w.put_bytes(kVersion);
  w.put(kind);
  w.put(static_cast<std::uint32_t>(plane.width()));
  w.put(static_cast<std::uint32_t>(plane.height()));
  w.put(static_cast<float>(disk.cx));
  w.put(static_cast<float>(disk.cy));
  w.put(static_cast<float>(disk.radius));
  w.put(modality);
  const auto px = plane.data();
  w.put_bytes({reinterpret_cast<const unsigned char*>(px.data()), px.size_bytes()});
  return w.take();
}

void write_bytes(const std::vector<unsigned char>& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

}  // namespace

std::vector<unsigned char> encode_container(const SolarImage& image) {
  return encode(0, image.plane(), image.disk(), static_cast<std::uint32_t>(image.modality()));
}

std::vector<unsigned char> encode_container(const ShadowMask& mask) {
  return encode(static_cast<std::uint32_t>(mask.kind()), mask.plane(), mask.disk(),
                static_cast<std::uint32_t>(Modality::Unspecified));
}

ContainerObject decode_container(std::span<const unsigned char> bytes) {
  if (bytes.size() < 8 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw Error(Errc::BadMagic, "missing SOLC signature");
  }
  if (!std::equal(kVersion.begin(), kVersion.end(), bytes.begin() + 4)) {
    throw Error(Errc::UnsupportedVersion, "only container version 1 is supported");
  }
  Reader r(bytes.subspan(8));
  const auto kind = r.get<std::uint32_t>();
  const auto width = r.get<std::uint32_t>();
  const auto height = r.get<std::uint32_t>();
  const auto cx = r.get<float>();
  const auto cy = r.get<float>();
  const auto radius = r.get<float>();
  const auto modality = r.get<std::uint32_t>();

  if (kind > 2) throw Error(Errc::MalformedHeader, "unknown object kind " + std::to_string(kind));
  if (modality > 2) throw Error(Errc::MalformedHeader, "unknown modality " + std::to_string(modality));
  if (width == 0 || height == 0 || width > (1u << 16) || height > (1u << 16)) {
    throw Error(Errc::MalformedHeader, "implausible dimensions");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(radius)) {
    throw Error(Errc::NonFiniteValue, "disk geometry");
  }

  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (r.remaining() < count * sizeof(float)) {
    throw Error(Errc::TruncatedPayload, "expected " + std::to_string(count * sizeof(float)) +
                                            " payload bytes, found " + std::to_string(r.remaining()));
  }
  std::vector<float> pixels(count);
  std::memcpy(pixels.data(), r.cursor(), count * sizeof(float));
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::isfinite(pixels[i])) throw Error(Errc::NonFiniteValue, "pixel " + std::to_string(i));
  }

  Plane plane(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
  const DiskGeometry disk{cx, cy, radius};
  if (kind == 0) return SolarImage(std::move(plane), disk, static_cast<Modality>(modality));
  return ShadowMask(std::move(plane), disk, static_cast<MaskKind>(kind));
}

ContainerObject read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_container(bytes);
}

SolarImage read_image(const std::filesystem::path& path) {
  auto obj = read_container(path);
  if (auto* img = std::get_if<SolarImage>(&obj)) return std::move(*img);
  throw Error(Errc::KindMismatch, path.string() + " holds a mask, not an image");
}

ShadowMask read_mask(const std::filesystem::path& path) {
  auto obj = read_container(path);
  if (auto* mask = std::get_if<ShadowMask>(&obj)) return std::move(*mask);
  throw Error(Errc::KindMismatch, path.string() + " holds an image, not a mask");
}

void write_container(const SolarImage& image, const std::filesystem::path& path) {
  image.validate();
  write_bytes(encode_container(image), path);
}

void write_container(const ShadowMask& mask, const std::filesystem::path& path) {
  mask.validate();
  write_bytes(encode_container(mask), path);
}

}  // namespace heliosweep
