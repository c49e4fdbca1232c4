#include <gtest/gtest.h>

#include <opencv2/imgcodecs.hpp>

#include "fixtures.hpp"
#include "heliosweep/error.hpp"
#include "heliosweep/png_io.hpp"
#include "heliosweep/rng.hpp"

using namespace heliosweep;
using heliosweep::testing::TempDir;

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

TEST(Png16, EndpointsMapToUnitRange) {
  TempDir tmp;
  cv::Mat m(2, 3, CV_16U);
  m.at<std::uint16_t>(0, 0) = 0;
  m.at<std::uint16_t>(0, 1) = 65535;
  m.at<std::uint16_t>(0, 2) = 32768;
  m.at<std::uint16_t>(1, 0) = 1;
  m.at<std::uint16_t>(1, 1) = 65534;
  m.at<std::uint16_t>(1, 2) = 12345;
  ASSERT_TRUE(cv::imwrite((tmp / "a.png").string(), m));
  const SolarImage img = import_png16(tmp / "a.png");
  ASSERT_EQ(img.width(), 3);
  ASSERT_EQ(img.height(), 2);
  EXPECT_EQ(img(0, 0), 0.0f);
  EXPECT_EQ(img(1, 0), 1.0f);
  EXPECT_FLOAT_EQ(img(2, 0), 32768.0f / 65535.0f);
  EXPECT_FLOAT_EQ(img(2, 1), 12345.0f / 65535.0f);
  EXPECT_EQ(img.disk(), full_frame_disk(3, 2));
}

TEST(Png16, QuarterRoundTripWithinHalfStep) {
  TempDir tmp;
  export_png16(Plane(4, 4, 0.25f), tmp / "q.png");
  const SolarImage back = import_png16(tmp / "q.png");
  for (float v : back.pixels()) EXPECT_LE(std::abs(v - 0.25), 1.0 / 131070.0);
}

TEST(Png16, RandomRoundTripWithinHalfStep) {
  TempDir tmp;
  Rng rng(9);
  Plane p(37, 23);
  for (auto& v : p.data()) v = static_cast<float>(rng.uniform());
  export_png16(p, tmp / "r.png");
  const SolarImage back = import_png16(tmp / "r.png");
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_LE(std::abs(static_cast<double>(back.pixels()[i]) - p.data()[i]), 1.0 / 131070.0 + 1e-7);
  }
}

TEST(Png16, ExportClampsOutOfRange) {
  TempDir tmp;
  Plane p(2, 1);
  p(0, 0) = -0.5f;
  p(1, 0) = 1.5f;
  export_png16(p, tmp / "c.png");
  const SolarImage back = import_png16(tmp / "c.png");
  EXPECT_EQ(back(0, 0), 0.0f);
  EXPECT_EQ(back(1, 0), 1.0f);
}

TEST(Png16, EightBitRejected) {
  TempDir tmp;
  cv::imwrite((tmp / "e.png").string(), cv::Mat(4, 4, CV_8U, cv::Scalar(7)));
  EXPECT_EQ(code_of([&] { import_png16(tmp / "e.png"); }), Errc::UnsupportedBitDepth);
}

TEST(Png16, ColorRejected) {
  TempDir tmp;
  cv::imwrite((tmp / "rgb.png").string(), cv::Mat(4, 4, CV_16UC3, cv::Scalar(1, 2, 3)));
  EXPECT_EQ(code_of([&] { import_png16(tmp / "rgb.png"); }), Errc::UnsupportedColorType);
}

TEST(Png16, MissingFile) {
  EXPECT_EQ(code_of([] { import_png16("/nonexistent/none.png"); }), Errc::IoFailure);
}

TEST(Png8, PreviewIsEightBit) {
  TempDir tmp;
  export_png8(Plane(5, 5, 0.5f), tmp / "p.png");
  const cv::Mat m = cv::imread((tmp / "p.png").string(), cv::IMREAD_UNCHANGED);
  EXPECT_EQ(m.depth(), CV_8U);
  EXPECT_EQ(m.at<std::uint8_t>(2, 2), 128);
}
