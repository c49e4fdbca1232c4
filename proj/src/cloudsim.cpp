#include "heliosweep/cloudsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heliosweep/error.hpp"
#include "heliosweep/rng.hpp"

namespace heliosweep {
namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

int wrap(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

/// Periodic lattice of uniform values, `cells` per side (1-D when rows == 1).
struct Lattice {
  int cols;
  int rows;
  std::vector<double> values;

  Lattice(int cols_, int rows_, Rng& rng) : cols(cols_), rows(rows_), values(static_cast<std::size_t>(cols_) * rows_) {
    for (double& v : values) v = rng.uniform();
  }

  double at(int i, int j) const { return values[static_cast<std::size_t>(wrap(j, rows)) * cols + wrap(i, cols)]; }

  double sample(double u, double v) const {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const int i = static_cast<int>(fu);
    const int j = static_cast<int>(fv);
    const double su = fade(u - fu);
    const double sv = fade(v - fv);
    const double top = at(i, j) + (at(i + 1, j) - at(i, j)) * su;
    if (rows == 1) return top;
    const double bottom = at(i, j + 1) + (at(i + 1, j + 1) - at(i, j + 1)) * su;
    return top + (bottom - top) * sv;
  }
};

void rescale_unit(std::vector<double>& acc) {
  const auto [lo_it, hi_it] = std::minmax_element(acc.begin(), acc.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  for (double& v : acc) v = span > 0.0 ? (v - lo) / span : 0.0;
}

double sample_wrapped(const Plane& texture, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double tx = x - fx;
  const double ty = y - fy;
  const int w = texture.width();
  const int h = texture.height();
  const double a = texture(wrap(x0, w), wrap(y0, h));
  const double b = texture(wrap(x0 + 1, w), wrap(y0, h));
  const double c = texture(wrap(x0, w), wrap(y0 + 1, h));
  const double d = texture(wrap(x0 + 1, w), wrap(y0 + 1, h));
  return (a * (1.0 - tx) + b * tx) * (1.0 - ty) + (c * (1.0 - tx) + d * tx) * ty;
}

/// Exact float spacing at v (v > 0).
double float_spacing(float v) {
  int exponent = 0;
  std::frexp(v, &exponent);
  return std::ldexp(1.0, exponent - 24);
}

}  // namespace

std::string_view texture_kind_name(TextureKind kind) noexcept {
  return kind == TextureKind::Fluffy ? "fluffy" : "streaked";
}

TextureKind parse_texture_kind(std::string_view name) {
  if (name == "fluffy") return TextureKind::Fluffy;
  if (name == "streaked") return TextureKind::Streaked;
  throw Error(Errc::InvalidArgument, "unknown texture kind '" + std::string(name) + "'");
}

Plane make_base_texture(TextureKind kind, int size, std::uint64_t seed, const TextureOptions& options) {
  if (size < 64) throw Error(Errc::InvalidArgument, "texture size must be at least 64");
  if (options.octaves < 1 || options.base_cells < 1) throw Error(Errc::InvalidArgument, "bad noise options");

  Rng rng(seed);
  const std::size_t n = static_cast<std::size_t>(size) * size;
  std::vector<double> acc(n, 0.0);

  if (kind == TextureKind::Fluffy) {
    double amplitude = 1.0;
    for (int o = 0; o < options.octaves; ++o) {
      const int cells = options.base_cells << o;
      const Lattice lattice(cells, cells, rng);
      const double step = static_cast<double>(cells) / size;
      for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) acc[static_cast<std::size_t>(y) * size + x] += amplitude * lattice.sample(x * step, y * step);
      }
      amplitude *= options.persistence;
    }
  } else {
    // 1-D profile along the scan axis, smeared along y.
    std::vector<double> profile(static_cast<std::size_t>(size), 0.0);
    double amplitude = 1.0;
    for (int o = 0; o < options.octaves; ++o) {
      const int cells = (2 * options.base_cells) << o;
      const Lattice lattice(cells, 1, rng);
      const double step = static_cast<double>(cells) / size;
      for (int x = 0; x < size; ++x) profile[static_cast<std::size_t>(x)] += amplitude * lattice.sample(x * step, 0.0);
      amplitude *= options.persistence;
    }
    const double shear = std::tan(options.shear_deg * std::numbers::pi / 180.0);
    for (int y = 0; y < size; ++y) {
      const double shift = shear * y;
      for (int x = 0; x < size; ++x) {
        const double t = x + shift;
        const double ft = std::floor(t);
        const double frac = t - ft;
        const int i = static_cast<int>(ft);
        const double a = profile[static_cast<std::size_t>(wrap(i, size))];
        const double b = profile[static_cast<std::size_t>(wrap(i + 1, size))];
        acc[static_cast<std::size_t>(y) * size + x] = frac == 0.0 ? a : a + (b - a) * frac;
      }
    }
  }

  rescale_unit(acc);
  std::vector<float> data(acc.begin(), acc.end());
  return Plane(size, size, std::move(data));
}

CloudRecipe sample_recipe(std::uint64_t seed, TextureKind kind) {
  Rng rng(seed);
  CloudRecipe recipe;
  recipe.seed = seed;
  recipe.texture_kind = kind;
  const auto count = 2 + rng.below(2);
  for (std::uint64_t k = 0; k < count; ++k) {
    CloudDuplicate dup;
    dup.scale_x = rng.uniform(0.5, 1.0);
    dup.scale_y = rng.uniform(0.5, 1.0);
    // Flip around one or two axes: {x}, {y} or {x, y}.
    switch (rng.below(3)) {
      case 0: dup.flip_x = true; break;
      case 1: dup.flip_y = true; break;
      default: dup.flip_x = dup.flip_y = true; break;
    }
    dup.alpha = rng.uniform(0.1, 0.4);
    dup.offset_x = rng.uniform();
    dup.offset_y = rng.uniform();
    recipe.duplicates.push_back(dup);
  }
  return recipe;
}

nlohmann::json recipe_to_json(const CloudRecipe& recipe) {
  nlohmann::json dups = nlohmann::json::array();
  for (const auto& d : recipe.duplicates) {
    dups.push_back({{"scale_x", d.scale_x},
                    {"scale_y", d.scale_y},
                    {"flip_x", d.flip_x},
                    {"flip_y", d.flip_y},
                    {"alpha", d.alpha},
                    {"offset_x", d.offset_x},
                    {"offset_y", d.offset_y}});
  }
  return {{"seed", recipe.seed},
          {"texture_kind", std::string(texture_kind_name(recipe.texture_kind))},
          {"duplicates", std::move(dups)}};
}

CloudRecipe recipe_from_json(const nlohmann::json& j) {
  try {
    CloudRecipe recipe;
    recipe.seed = j.at("seed").get<std::uint64_t>();
    recipe.texture_kind = parse_texture_kind(j.at("texture_kind").get<std::string>());
    for (const auto& d : j.at("duplicates")) {
      CloudDuplicate dup;
      dup.scale_x = d.at("scale_x").get<double>();
      dup.scale_y = d.at("scale_y").get<double>();
      dup.flip_x = d.at("flip_x").get<bool>();
      dup.flip_y = d.at("flip_y").get<bool>();
      dup.alpha = d.at("alpha").get<double>();
      dup.offset_x = d.at("offset_x").get<double>();
      dup.offset_y = d.at("offset_y").get<double>();
      recipe.duplicates.push_back(dup);
    }
    return recipe;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptEntry, std::string("recipe: ") + e.what());
  }
}

CloudField cloud_field(const DiskGeometry& disk, int width, int height, const CloudRecipe& recipe,
                       const Plane& texture, const CompositeOptions& options) {
  if (!(options.a_max >= 0.0 && options.a_max < 1.0)) throw Error(Errc::InvalidArgument, "a_max must lie in [0, 1)");
  const int tw = texture.width();
  const int th = texture.height();

  std::vector<double> sum(static_cast<std::size_t>(width) * height, 0.0);
  for (const auto& dup : recipe.duplicates) {
    const int rw = static_cast<int>(std::lround(dup.scale_x * tw));
    const int rh = static_cast<int>(std::lround(dup.scale_y * th));
    if (rw < width || rh < height) {
      throw Error(Errc::RecipeTextureMismatch, "resized texture " + std::to_string(rw) + "x" + std::to_string(rh) +
                                                   " cannot cover a " + std::to_string(width) + "x" +
                                                   std::to_string(height) + " frame");
    }
    const int ox = std::min(rw - 1, static_cast<int>(dup.offset_x * rw));
    const int oy = std::min(rh - 1, static_cast<int>(dup.offset_y * rh));
    const double sx = static_cast<double>(tw) / rw;
    const double sy = static_cast<double>(th) / rh;
    for (int y = 0; y < height; ++y) {
      int v = (y + oy) % rh;
      if (dup.flip_y) v = rh - 1 - v;
      const double ty = (v + 0.5) * sy - 0.5;
      for (int x = 0; x < width; ++x) {
        int u = (x + ox) % rw;
        if (dup.flip_x) u = rw - 1 - u;
        const double tx = (u + 0.5) * sx - 0.5;
        sum[static_cast<std::size_t>(y) * width + x] += dup.alpha * sample_wrapped(texture, tx, ty);
      }
    }
  }

  CloudField field{Plane(width, height), options.a_max};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!disk.contains(x, y)) continue;
      field.attenuation(x, y) = static_cast<float>(std::clamp(sum[static_cast<std::size_t>(y) * width + x], 0.0, options.a_max));
    }
  }
  return field;
}

CompositeResult composite(const SolarImage& clean, const CloudRecipe& recipe, const Plane& texture,
                          const CompositeOptions& options) {
  const int w = clean.width();
  const int h = clean.height();
  CloudField field = cloud_field(clean.disk(), w, h, recipe, texture, options);

  Plane cloudy(w, h);
  Plane residual(w, h);
  Plane transmittance(w, h, 1.0f);
  const auto inside = clean.support();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!inside[static_cast<std::size_t>(y) * w + x]) continue;
      const float c = clean(x, y);
      const double a = field.attenuation(x, y);
      transmittance(x, y) = static_cast<float>(1.0 - a);
      if (c <= 0.0f) continue;
      const double spacing = float_spacing(c);
      const auto removed = static_cast<float>(std::round(c * a / spacing) * spacing);
      cloudy(x, y) = c - removed;  // exact: both are multiples of the spacing and removed <= c
      residual(x, y) = removed;
    }
  }

  return {clean.with_pixels(std::move(cloudy)),
          ShadowMask(std::move(residual), clean.disk(), MaskKind::Residual),
          ShadowMask(std::move(transmittance), clean.disk(), MaskKind::Transmittance),
          std::move(field)};
}

}  // namespace heliosweep
