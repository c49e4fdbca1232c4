#include "heliosweep/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "heliosweep/container.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/parallel.hpp"
#include "heliosweep/rng.hpp"

namespace fs = std::filesystem;

namespace heliosweep {
namespace {

constexpr std::uint64_t kSplitStream = 0x5b1175b1175ULL;

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(Errc::IoFailure, "cannot write " + path.string());
}

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(Errc::IoFailure, "SHA-256 unavailable");
    }
  }
  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

nlohmann::json entry_to_json(const ManifestEntry& e) {
  return {{"id", e.id},
          {"split", std::string(split_name(e.split))},
          {"recipe_seed", e.recipe_seed},
          {"clean", e.clean},
          {"cloudy", e.cloudy},
          {"mask_residual", e.mask_residual},
          {"mask_transmittance", e.mask_transmittance},
          {"recipe", e.recipe},
          {"sha256", e.checksum}};
}

ManifestEntry entry_from_json(const nlohmann::json& j) {
  ManifestEntry e;
  e.id = j.at("id").get<std::string>();
  e.split = parse_split(j.at("split").get<std::string>());
  e.recipe_seed = j.at("recipe_seed").get<std::uint64_t>();
  e.clean = j.at("clean").get<std::string>();
  e.cloudy = j.at("cloudy").get<std::string>();
  e.mask_residual = j.at("mask_residual").get<std::string>();
  e.mask_transmittance = j.at("mask_transmittance").get<std::string>();
  e.recipe = j.at("recipe").get<std::string>();
  e.checksum = j.at("sha256").get<std::string>();
  return e;
}

std::vector<std::string> entry_files(const ManifestEntry& e) {
  return {e.clean, e.cloudy, e.mask_residual, e.mask_transmittance, e.recipe};
}

}  // namespace

std::string_view split_name(Split s) noexcept {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  throw Error(Errc::InvalidArgument, "unknown split '" + std::string(name) + "'");
}

SplitSizes split_sizes(int n, const SplitFractions& f) {
  if (n < 0 || f.train < 0.0 || f.val < 0.0 || f.test < 0.0) {
    throw Error(Errc::InvalidArgument, "split sizes need n >= 0 and nonnegative fractions");
  }
  SplitSizes s;
  s.train = static_cast<int>(std::lround(n * f.train));
  s.val = static_cast<int>(std::lround(n * f.val));
  s.test = n - s.train - s.val;
  if (s.test < 0) throw Error(Errc::InvalidArgument, "split fractions exceed 1");
  return s;
}

std::vector<Split> assign_splits(int n, std::uint64_t seed, const SplitFractions& fractions) {
  const SplitSizes sizes = split_sizes(n, fractions);
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  Rng rng(derive_seed(seed, kSplitStream));
  for (int i = n - 1; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  std::vector<Split> out(static_cast<std::size_t>(n), Split::Test);
  for (int k = 0; k < n; ++k) {
    const Split s = k < sizes.train ? Split::Train : k < sizes.train + sizes.val ? Split::Val : Split::Test;
    out[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = s;
  }
  return out;
}

std::vector<ManifestEntry> Manifest::in_split(Split s) const {
  std::vector<ManifestEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [s](const auto& e) { return e.split == s; });
  return out;
}

std::string entry_checksum(const ManifestEntry& e, const fs::path& root) {
  Sha256 sha;
  sha.update(fmt::format("{}\n{}\n{}\n", e.id, split_name(e.split), e.recipe_seed));
  for (const auto& rel : entry_files(e)) {
    const auto bytes = read_bytes(root / rel);
    sha.update(fmt::format("{}\n{}\n", rel, bytes.size()));
    sha.update(bytes.data(), bytes.size());
  }
  return sha.hex();
}

Manifest build_dataset(const fs::path& clean_dir, const fs::path& out_dir, const DatasetOptions& options) {
  if (options.repeats < 1) throw Error(Errc::InvalidArgument, "repeats must be >= 1");
  std::vector<fs::path> sources;
  if (fs::is_directory(clean_dir)) {
    for (const auto& de : fs::directory_iterator(clean_dir)) {
      if (de.is_regular_file() && de.path().extension() == ".solc") sources.push_back(de.path());
    }
  }
  if (sources.empty()) throw Error(Errc::EmptyInput, "no *.solc images in " + clean_dir.string());
  std::sort(sources.begin(), sources.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  for (const char* sub : {"clean", "cloudy", "masks/residual", "masks/transmittance", "recipes"}) {
    fs::create_directories(out_dir / sub);
  }

  const int n = static_cast<int>(sources.size());
  const auto splits = assign_splits(n, options.seed, options.fractions);
  const std::uint64_t texture_seed = derive_seed(options.seed, 0);
  const int repeats = options.repeats;

  std::vector<SolarImage> images(sources.size());
  parallel_for(sources.size(), options.jobs, [&](std::size_t i) { images[i] = read_image(sources[i]); });

  std::map<int, Plane> textures;  // keyed by frame size
  for (const auto& img : images) {
    const int size = std::max(img.width(), img.height());
    if (!textures.contains(size)) {
      textures.emplace(size, make_base_texture(options.texture_kind, texture_size_for(size), texture_seed, options.texture));
    }
  }

  std::vector<ManifestEntry> entries(static_cast<std::size_t>(n) * repeats);
  parallel_for(entries.size(), options.jobs, [&](std::size_t k) {
    const std::size_t i = k / repeats;
    const int r = static_cast<int>(k % repeats);
    const SolarImage& clean = images[i];
    const std::string stem = sources[i].stem().string();

    ManifestEntry& e = entries[k];
    e.id = repeats == 1 ? stem : fmt::format("{}_r{}", stem, r);
    e.split = splits[i];
    e.recipe_seed = derive_seed(options.seed, k + 1);
    e.clean = "clean/" + e.id + ".solc";
    e.cloudy = "cloudy/" + e.id + ".solc";
    e.mask_residual = "masks/residual/" + e.id + ".solc";
    e.mask_transmittance = "masks/transmittance/" + e.id + ".solc";
    e.recipe = "recipes/" + e.id + ".json";

    const CloudRecipe recipe = sample_recipe(e.recipe_seed, options.texture_kind);
    const int size = std::max(clean.width(), clean.height());
    const CompositeResult out = composite(clean, recipe, textures.at(size), options.composite);

    write_container(clean, out_dir / e.clean);
    write_container(out.cloudy, out_dir / e.cloudy);
    write_container(out.gt_residual, out_dir / e.mask_residual);
    write_container(out.gt_transmittance, out_dir / e.mask_transmittance);
    nlohmann::json sidecar = recipe_to_json(recipe);
    sidecar["texture_seed"] = texture_seed;
    sidecar["texture_size"] = texture_size_for(size);
    sidecar["a_max"] = options.composite.a_max;
    write_text(out_dir / e.recipe, sidecar.dump(2) + "\n");
    e.checksum = entry_checksum(e, out_dir);
  });

  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::string text;
  for (const auto& e : entries) text += entry_to_json(e).dump() + "\n";
  write_text(out_dir / kManifestName, text);
  return Manifest{out_dir, std::move(entries)};
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MissingFile, path.string());
  Manifest manifest;
  manifest.root = path.parent_path();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ManifestEntry e;
    try {
      e = entry_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::CorruptEntry, fmt::format("{}:{}: {}", path.string(), line_no, ex.what()));
    } catch (const Error& ex) {
      throw Error(Errc::CorruptEntry, fmt::format("{}:{}: {}", path.string(), line_no, ex.what()));
    }
    for (const auto& rel : entry_files(e)) {
      if (!fs::is_regular_file(manifest.resolve(rel))) throw Error(Errc::MissingFile, manifest.resolve(rel).string());
    }
    if (entry_checksum(e, manifest.root) != e.checksum) {
      throw Error(Errc::CorruptEntry, fmt::format("{}: checksum mismatch for '{}'", path.string(), e.id));
    }
    try {
      const SolarImage clean = read_image(manifest.resolve(e.clean));
      const SolarImage cloudy = read_image(manifest.resolve(e.cloudy));
      const ShadowMask residual = read_mask(manifest.resolve(e.mask_residual));
      const ShadowMask trans = read_mask(manifest.resolve(e.mask_transmittance));
      clean.validate();
      cloudy.validate();
      residual.validate();
      trans.validate();
      if (residual.kind() != MaskKind::Residual || trans.kind() != MaskKind::Transmittance) {
        throw Error(Errc::KindMismatch, "mask kinds swapped");
      }
      if (!clean.plane().same_shape(cloudy.plane()) || clean.disk() != cloudy.disk() ||
          clean.disk() != residual.disk() || clean.disk() != trans.disk()) {
        throw Error(Errc::MisalignedPair, "entry objects disagree on shape or disk");
      }
      std::ifstream rin(manifest.resolve(e.recipe));
      const CloudRecipe recipe = recipe_from_json(nlohmann::json::parse(rin));
      if (recipe.seed != e.recipe_seed) throw Error(Errc::CorruptEntry, "recipe seed differs from manifest");
    } catch (const Error& ex) {
      throw Error(Errc::CorruptEntry, fmt::format("'{}': {}", e.id, ex.what()));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::CorruptEntry, fmt::format("'{}': {}", e.id, ex.what()));
    }
    manifest.entries.push_back(std::move(e));
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return manifest;
}

}  // namespace heliosweep
