#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "heliosweep/cloudsim.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/maskops.hpp"
#include "heliosweep/rng.hpp"
#include "heliosweep/synthetic_sun.hpp"

using namespace heliosweep;
using heliosweep::testing::uniform_disk;

namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::InvalidArgument;
}

ShadowMask const_mask(const SolarImage& like, float v, MaskKind kind) {
  const auto inside = like.support();
  Plane p(like.width(), like.height(), kind == MaskKind::Transmittance ? 1.0f : 0.0f);
  for (std::size_t i = 0; i < inside.size(); ++i) {
    if (inside[i]) p.data()[i] = v;
  }
  return ShadowMask(p, like.disk(), kind);
}

}  // namespace

TEST(ShadowRatio, UnitMaskIsIdentity) {
  const SolarImage img = synthesize_sun(1, {.size = 64});
  EXPECT_EQ(apply_shadow_ratio(img, const_mask(img, 1.0f, MaskKind::Transmittance)), img);
}

TEST(ShadowRatio, Arithmetic) {
  const SolarImage img = uniform_disk(32, 0.9, 0.6);
  EXPECT_NEAR(apply_shadow_ratio(img, const_mask(img, 0.75f, MaskKind::Transmittance))(16, 16), 0.8, 1e-6);
}

TEST(ShadowRatio, ZeroPixelInDisk) {
  const SolarImage img = uniform_disk(32, 0.9, 0.6);
  ShadowMask m = const_mask(img, 0.5f, MaskKind::Transmittance);
  Plane p = m.plane();
  p(16, 16) = 0.0f;
  EXPECT_EQ(code_of([&] { apply_shadow_ratio(img, ShadowMask(p, img.disk(), MaskKind::Transmittance)); }),
            Errc::ZeroMaskPixel);
}

TEST(Division, ArithmeticWithDefaultEpsilon) {
  const SolarImage img = uniform_disk(32, 0.9, 0.5);
  const SolarImage out = apply_division(img, const_mask(img, 0.5f, MaskKind::Transmittance));
  EXPECT_NEAR(out(16, 16), 0.5 / 0.50001, 1e-7);
  EXPECT_NEAR(out(16, 16), 0.99998, 1e-5);
}

TEST(Division, ZeroMaskClipsToOne) {
  const SolarImage img = uniform_disk(32, 0.9, 0.3);
  const SolarImage out = apply_division(img, ShadowMask(Plane(32, 32), img.disk(), MaskKind::Transmittance));
  const auto inside = img.support();
  for (std::size_t i = 0; i < inside.size(); ++i) EXPECT_EQ(out.pixels()[i], inside[i] ? 1.0f : 0.0f);
}

TEST(Division, KindMismatch) {
  const SolarImage img = uniform_disk(32, 0.9, 0.3);
  EXPECT_EQ(code_of([&] { apply_division(img, const_mask(img, 0.1f, MaskKind::Residual)); }), Errc::KindMismatch);
}

TEST(Division, RecoversCleanFromGroundTruth) {
  const SolarImage clean = synthesize_sun(8, {.size = 128});
  const Plane tex = make_base_texture(TextureKind::Fluffy, 256, 3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto c = composite(clean, sample_recipe(s), tex);
    const SolarImage back = apply_division(c.cloudy, c.gt_transmittance);
    for (std::size_t i = 0; i < clean.pixels().size(); ++i) {
      ASSERT_LT(std::abs(back.pixels()[i] - clean.pixels()[i]), 1e-3);
    }
  }
}

TEST(Residual, ZeroMaskIsIdentity) {
  const SolarImage img = synthesize_sun(2, {.size = 64});
  EXPECT_EQ(apply_residual(img, const_mask(img, 0.0f, MaskKind::Residual)), img);
}

TEST(Residual, Arithmetic) {
  const SolarImage img = uniform_disk(32, 0.9, 0.3);
  EXPECT_NEAR(apply_residual(img, const_mask(img, 0.2f, MaskKind::Residual))(16, 16), 0.5, 1e-7);
}

TEST(Residual, ClipsAndZeroesBackground) {
  const SolarImage img = uniform_disk(32, 0.5, 0.9);
  const SolarImage out = apply_residual(img, const_mask(img, 0.5f, MaskKind::Residual));
  const auto inside = img.support();
  for (std::size_t i = 0; i < inside.size(); ++i) EXPECT_EQ(out.pixels()[i], inside[i] ? 1.0f : 0.0f);
}

TEST(Residual, KindMismatch) {
  const SolarImage img = uniform_disk(32, 0.9, 0.3);
  EXPECT_EQ(code_of([&] { apply_residual(img, const_mask(img, 1.0f, MaskKind::Transmittance)); }), Errc::KindMismatch);
}

TEST(Residual, ShapeMismatch) {
  const SolarImage img = uniform_disk(32, 0.9, 0.3);
  const SolarImage other = uniform_disk(16, 0.9, 0.3);
  EXPECT_EQ(code_of([&] { apply_residual(img, const_mask(other, 0.0f, MaskKind::Residual)); }), Errc::ShapeMismatch);
}

TEST(DeriveMask, IdentityPair) {
  const SolarImage img = synthesize_sun(3, {.size = 64});
  const ShadowMask r = derive_gt_mask(img, img, MaskKind::Residual);
  const ShadowMask t = derive_gt_mask(img, img, MaskKind::Transmittance);
  for (float v : r.pixels()) EXPECT_EQ(v, 0.0f);
  for (float v : t.pixels()) EXPECT_FLOAT_EQ(v, 1.0f);
}

TEST(DeriveMask, Arithmetic) {
  const SolarImage clean = uniform_disk(32, 0.9, 0.8);
  const SolarImage cloudy = uniform_disk(32, 0.9, 0.6);
  EXPECT_NEAR(derive_gt_mask(clean, cloudy, MaskKind::Residual)(16, 16), 0.2, 1e-6);
  EXPECT_NEAR(derive_gt_mask(clean, cloudy, MaskKind::Transmittance)(16, 16), 0.75, 1e-6);
}

TEST(DeriveMask, DarkCleanPixelsGetUnitTransmittance) {
  const SolarImage clean = uniform_disk(32, 0.9, 0.01);
  const SolarImage cloudy = uniform_disk(32, 0.9, 0.005);
  EXPECT_EQ(derive_gt_mask(clean, cloudy, MaskKind::Transmittance)(16, 16), 1.0f);
}

TEST(DeriveMask, Misaligned) {
  const SolarImage a = uniform_disk(32, 0.9, 0.5);
  const SolarImage b = uniform_disk(32, 0.8, 0.5);
  EXPECT_EQ(code_of([&] { derive_gt_mask(a, b, MaskKind::Residual); }), Errc::MisalignedPair);
}

TEST(DeriveMask, ResidualRoundTripOverRandomPairs) {
  const Plane tex = make_base_texture(TextureKind::Streaked, 256, 12);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const SolarImage clean = synthesize_sun(100 + s, {.size = 128});
    const auto c = composite(clean, sample_recipe(s, TextureKind::Streaked), tex);
    const ShadowMask m = derive_gt_mask(clean, c.cloudy, MaskKind::Residual);
    EXPECT_NO_THROW(m.validate());
    EXPECT_EQ(apply_residual(c.cloudy, m), clean) << "seed " << s;
  }
}

TEST(Sensitivity, GradientScalesWithInverseSquare) {
  const double eps = kDefaultEpsilon;
  const double low = division_sensitivity(0.5, 0.1, eps);
  const double high = division_sensitivity(0.5, 0.9, eps);
  EXPECT_NEAR(low / high, ((0.9 + eps) / (0.1 + eps)) * ((0.9 + eps) / (0.1 + eps)), 1e-6);
  EXPECT_NEAR(division_sensitivity(0.5, 0.2, 0.0) / division_sensitivity(0.5, 1.0, 0.0), 25.0, 1e-6);
  // Matches a central finite difference of the division itself.
  const double m = 0.3, h = 1e-6;
  const double fd = (0.5 / (m - h + eps) - 0.5 / (m + h + eps)) / (2 * h);
  EXPECT_NEAR(division_sensitivity(0.5, m, eps), fd, 1e-4);
}
