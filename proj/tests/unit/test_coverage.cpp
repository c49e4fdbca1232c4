#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "heliosweep/container.hpp"
#include "heliosweep/coverage.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/synthetic_sun.hpp"

using namespace heliosweep;
using heliosweep::testing::disk_image;
using heliosweep::testing::TempDir;
using heliosweep::testing::uniform_disk;

namespace {

SolarImage dark_quadrant(int size, double value, double dark) {
  return disk_image(size, 0.9, [&](int x, int y, const DiskGeometry& d) { return x < d.cx && y < d.cy ? dark : value; });
}

/// Population CV of four numbers, the arithmetic the score reduces to.
double cv4(double a, double b, double c, double d) {
  const double m = (a + b + c + d) / 4;
  const double v = ((a - m) * (a - m) + (b - m) * (b - m) + (c - m) * (c - m) + (d - m) * (d - m)) / 4;
  return std::sqrt(v) / m;
}

}  // namespace

TEST(Coverage, UniformDiskScoresZero) { EXPECT_EQ(coverage_level(uniform_disk(128, 0.9, 0.7)), 0.0); }

TEST(Coverage, OneDarkQuadrant) {
  EXPECT_NEAR(cv4(0.35, 0.7, 0.7, 0.7), 0.2474, 1e-4);
  EXPECT_NEAR(coverage_level(dark_quadrant(128, 0.7, 0.35)), cv4(0.35, 0.7, 0.7, 0.7), 1e-6);
}

TEST(Coverage, ScaleInvariant) {
  const SolarImage sun = synthesize_sun(3, {.size = 128});
  Plane half = sun.plane();
  for (auto& v : half.data()) v *= 0.5f;
  EXPECT_NEAR(coverage_level(sun.with_pixels(half)), coverage_level(sun), 1e-6);
}

TEST(Coverage, RotationInvariant) {
  const SolarImage sun = synthesize_sun(4, {.size = 128});
  Plane rot(128, 128);
  for (int y = 0; y < 128; ++y) {
    for (int x = 0; x < 128; ++x) rot(127 - y, x) = sun(x, y);
  }
  EXPECT_NEAR(coverage_level(sun.with_pixels(rot)), coverage_level(sun), 1e-6);
}

TEST(Coverage, MonotoneUnderDarkeningOneQuadrant) {
  double prev = -1;
  for (double dark : {0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1}) {
    const double s = coverage_level(dark_quadrant(96, 0.7, dark));
    EXPECT_GE(s, prev);
    prev = s;
  }
}

TEST(Coverage, EmptyDisk) {
  const SolarImage img(Plane(16, 16), DiskGeometry{3, 3, 0.5});
  try {
    coverage_level(img);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyDisk);
  }
}

TEST(Triage, EmptyDirectory) {
  TempDir tmp;
  const TriageResult t = triage(tmp.path());
  EXPECT_TRUE(t.cloudfree.empty());
  EXPECT_TRUE(t.cloudy.empty());
}

TEST(Triage, SplitsUniformFromDarkQuadrant) {
  TempDir tmp;
  for (int i = 0; i < 10; ++i) {
    write_container(uniform_disk(64, 0.9, 0.5 + 0.02 * i), tmp / ("u" + std::to_string(i) + ".solc"));
    write_container(dark_quadrant(64, 0.7, 0.35), tmp / ("d" + std::to_string(i) + ".solc"));
  }
  const TriageResult t = triage(tmp.path(), 0.1);
  EXPECT_EQ(t.cloudfree.size(), 10u);
  EXPECT_EQ(t.cloudy.size(), 10u);
  for (const auto& e : t.cloudfree) EXPECT_EQ(e.path.filename().string()[0], 'u');
}

TEST(Triage, ZeroThresholdFlagsAnyAsymmetry) {
  TempDir tmp;
  write_container(uniform_disk(64, 0.9, 0.5), tmp / "a.solc");
  write_container(dark_quadrant(64, 0.7, 0.69), tmp / "b.solc");
  const TriageResult t = triage(tmp.path(), 0.0);
  ASSERT_EQ(t.cloudfree.size(), 1u);
  ASSERT_EQ(t.cloudy.size(), 1u);
  EXPECT_EQ(t.cloudy[0].path.filename(), "b.solc");
}
