#include "heliosweep/png_io.hpp"

#include <algorithm>
#include <cmath>
#include <opencv2/imgcodecs.hpp>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

template <typename T>
cv::Mat quantize(const Plane& plane, double scale, int type) {
  cv::Mat out(plane.height(), plane.width(), type);
  for (int y = 0; y < plane.height(); ++y) {
    auto* row = out.ptr<T>(y);
    for (int x = 0; x < plane.width(); ++x) {
      const double v = std::clamp(static_cast<double>(plane(x, y)), 0.0, 1.0);
      row[x] = static_cast<T>(std::lround(v * scale));
    }
  }
  return out;
}

void write_png(const cv::Mat& mat, const std::filesystem::path& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    throw Error(Errc::IoFailure, path.string() + ": " + e.what());
  }
  if (!ok) throw Error(Errc::IoFailure, "cannot write " + path.string());
}

}  // namespace

SolarImage import_png16(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(Errc::IoFailure, "missing " + path.string());
  const cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw Error(Errc::IoFailure, "cannot decode " + path.string());
  if (mat.channels() != 1) {
    throw Error(Errc::UnsupportedColorType, path.string() + " has " + std::to_string(mat.channels()) + " channels");
  }
  if (mat.depth() != CV_16U) throw Error(Errc::UnsupportedBitDepth, path.string() + " is not 16-bit");

  Plane plane(mat.cols, mat.rows);
  for (int y = 0; y < mat.rows; ++y) {
    const auto* row = mat.ptr<std::uint16_t>(y);
    for (int x = 0; x < mat.cols; ++x) plane(x, y) = static_cast<float>(row[x] / 65535.0);
  }
  return SolarImage(std::move(plane), full_frame_disk(mat.cols, mat.rows));
}

void export_png16(const Plane& plane, const std::filesystem::path& path) {
  write_png(quantize<std::uint16_t>(plane, 65535.0, CV_16UC1), path);
}

void export_png8(const Plane& plane, const std::filesystem::path& path) {
  write_png(quantize<std::uint8_t>(plane, 255.0, CV_8UC1), path);
}

}  // namespace heliosweep
