#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fixtures.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/image.hpp"

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

}  // namespace

TEST(DiskGeometry, CenteredDiskSitsAtFrameCenter) {
  const DiskGeometry d = centered_disk(512, 0.45);
  EXPECT_DOUBLE_EQ(d.cx, 255.5);
  EXPECT_DOUBLE_EQ(d.cy, 255.5);
  EXPECT_NEAR(d.radius, 115.2, 1e-5);
  EXPECT_EQ(d, d.quantized());
}

TEST(DiskGeometry, FullFrameDiskCoversEveryPixel) {
  const auto inside = disk_support(37, 21, full_frame_disk(37, 21));
  for (auto v : inside) EXPECT_EQ(v, 1);
}

TEST(DiskGeometry, SupportCountMatchesBruteForce) {
  const DiskGeometry d{40.3, 38.7, 20.5};
  const auto inside = disk_support(80, 80, d);
  int expected = 0;
  for (int y = 0; y < 80; ++y) {
    for (int x = 0; x < 80; ++x) {
      const double dx = x - 40.3, dy = y - 38.7;
      const bool in = dx * dx + dy * dy <= 20.5 * 20.5;
      expected += in;
      EXPECT_EQ(inside[static_cast<std::size_t>(y) * 80 + x], in ? 1 : 0);
    }
  }
  EXPECT_NEAR(expected, std::numbers::pi * 20.5 * 20.5, 2 * std::numbers::pi * 20.5);
}

TEST(Modality, NamesRoundTrip) {
  for (Modality m : {Modality::CaII, Modality::HAlpha, Modality::Unspecified}) {
    EXPECT_EQ(parse_modality(modality_name(m)), m);
  }
  EXPECT_EQ(code_of([] { parse_modality("uv"); }), Errc::InvalidArgument);
}

TEST(Plane, RejectsMismatchedBuffer) {
  EXPECT_EQ(code_of([] { Plane(3, 3, std::vector<float>(8)); }), Errc::ShapeMismatch);
  const Plane p(3, 2, std::vector<float>{0, 1, 2, 3, 4, 5});
  EXPECT_EQ(p(2, 1), 5.0f);
  EXPECT_EQ(p(0, 1), 3.0f);
}

TEST(SolarImage, ValidDiskPasses) {
  EXPECT_NO_THROW(uniform_disk(64, 0.9, 0.7).validate());
}

TEST(SolarImage, PixelAboveOneRejected) {
  SolarImage img = uniform_disk(32, 0.9, 0.5);
  Plane p = img.plane();
  p(16, 16) = 1.25f;
  EXPECT_EQ(code_of([&] { img.with_pixels(p).validate(); }), Errc::InvariantViolation);
}

TEST(SolarImage, NonzeroBackgroundRejected) {
  SolarImage img = uniform_disk(32, 0.5, 0.5);
  Plane p = img.plane();
  p(0, 0) = 0.1f;
  EXPECT_EQ(code_of([&] { img.with_pixels(p).validate(); }), Errc::InvariantViolation);
}

TEST(SolarImage, NanRejected) {
  SolarImage img = uniform_disk(32, 0.9, 0.5);
  Plane p = img.plane();
  p(16, 16) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_EQ(code_of([&] { img.with_pixels(p).validate(); }), Errc::NonFiniteValue);
}

TEST(SolarImage, ZeroRadiusRejected) {
  const SolarImage img(Plane(8, 8), DiskGeometry{4, 4, 0});
  EXPECT_EQ(code_of([&] { img.validate(); }), Errc::InvariantViolation);
}

TEST(SolarImage, WithPixelsKeepsGeometryAndRejectsResize) {
  const SolarImage img(Plane(8, 8), DiskGeometry{3.5, 3.5, 3}, Modality::HAlpha);
  const SolarImage other = img.with_pixels(Plane(8, 8, 0.0f));
  EXPECT_EQ(other.disk(), img.disk());
  EXPECT_EQ(other.modality(), Modality::HAlpha);
  EXPECT_EQ(code_of([&] { img.with_pixels(Plane(4, 8)); }), Errc::ShapeMismatch);
}

TEST(ShadowMask, TransmittanceRange) {
  const DiskGeometry d = centered_disk(16, 0.9);
  EXPECT_NO_THROW(ShadowMask(Plane(16, 16, 1.0f), d, MaskKind::Transmittance).validate());
  Plane p(16, 16, 1.0f);
  p(3, 3) = 1.01f;
  EXPECT_EQ(code_of([&] { ShadowMask(p, d, MaskKind::Transmittance).validate(); }), Errc::InvariantViolation);
  p(3, 3) = -0.01f;
  EXPECT_EQ(code_of([&] { ShadowMask(p, d, MaskKind::Transmittance).validate(); }), Errc::InvariantViolation);
}

TEST(ShadowMask, ResidualNegativeInsideRejected) {
  const DiskGeometry d = centered_disk(16, 0.9);
  Plane p(16, 16);
  p(8, 8) = -0.1f;
  EXPECT_EQ(code_of([&] { ShadowMask(p, d, MaskKind::Residual).validate(); }), Errc::InvariantViolation);
}

TEST(ShadowMask, ResidualOutsideDiskMustBeZero) {
  const DiskGeometry d = centered_disk(16, 0.5);
  Plane p(16, 16);
  p(8, 8) = 2.0f;  // residuals may exceed 1 inside the disk
  EXPECT_NO_THROW(ShadowMask(p, d, MaskKind::Residual).validate());
  p(0, 0) = 0.1f;
  EXPECT_EQ(code_of([&] { ShadowMask(p, d, MaskKind::Residual).validate(); }), Errc::InvariantViolation);
}

TEST(Error, MessageCarriesCodeName) {
  const Error e(Errc::BadMagic, "file.solc");
  EXPECT_EQ(e.code(), Errc::BadMagic);
  EXPECT_EQ(std::string(e.what()), "BadMagic: file.solc");
}
