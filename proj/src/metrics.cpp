#include "heliosweep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

void require_comparable(const SolarImage& a, const SolarImage& b) {
  if (!a.plane().same_shape(b.plane())) throw Error(Errc::ShapeMismatch, "image sizes differ");
  if (a.disk() != b.disk()) throw Error(Errc::ShapeMismatch, "disk geometries differ");
}

double mse(const SolarImage& a, const SolarImage& b) {
  require_comparable(a, b);
  const auto inside = a.support();
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (!inside[i]) continue;
    const double d = static_cast<double>(pa[i]) - pb[i];
    sum += d * d;
    ++n;
  }
  if (n == 0) throw Error(Errc::EmptyDisk, "no in-disk pixels to compare");
  return sum / static_cast<double>(n);
}

/// Separable weighted sum over a (2r+1)^2 window with zero padding.
std::vector<double> separable_filter(const std::vector<double>& in, int w, int h, const std::vector<double>& taps) {
  const int r = static_cast<int>(taps.size()) / 2;
  std::vector<double> tmp(in.size(), 0.0);
  std::vector<double> out(in.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int xx = x + k;
        if (xx >= 0 && xx < w) acc += taps[k + r] * in[static_cast<std::size_t>(y) * w + xx];
      }
      tmp[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int k = -r; k <= r; ++k) {
        const int yy = y + k;
        if (yy >= 0 && yy < h) acc += taps[k + r] * tmp[static_cast<std::size_t>(yy) * w + x];
      }
      out[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
  return out;
}

}  // namespace

double rmse(const SolarImage& a, const SolarImage& b) { return std::sqrt(mse(a, b)); }

double psnr(const SolarImage& a, const SolarImage& b, double peak) {
  const double m = mse(a, b);
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / m);
}

double ssim(const SolarImage& a, const SolarImage& b, const SsimOptions& options) {
  require_comparable(a, b);
  if (options.window < 1 || options.window % 2 == 0) throw Error(Errc::InvalidArgument, "SSIM window must be odd");
  const int w = a.width();
  const int h = a.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const auto inside = a.support();

  const int r = options.window / 2;
  std::vector<double> taps(static_cast<std::size_t>(options.window));
  for (int k = -r; k <= r; ++k) taps[k + r] = std::exp(-(k * k) / (2.0 * options.sigma * options.sigma));

  std::vector<double> m(n), va(n), vb(n), vaa(n), vbb(n), vab(n);
  const auto pa = a.pixels();
  const auto pb = b.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    if (!inside[i]) continue;
    const double x = pa[i];
    const double y = pb[i];
    m[i] = 1.0;
    va[i] = x;
    vb[i] = y;
    vaa[i] = x * x;
    vbb[i] = y * y;
    vab[i] = x * y;
  }
  const auto sm = separable_filter(m, w, h, taps);
  const auto sa = separable_filter(va, w, h, taps);
  const auto sb = separable_filter(vb, w, h, taps);
  const auto saa = separable_filter(vaa, w, h, taps);
  const auto sbb = separable_filter(vbb, w, h, taps);
  const auto sab = separable_filter(vab, w, h, taps);

  const double c1 = (options.k1 * options.peak) * (options.k1 * options.peak);
  const double c2 = (options.k2 * options.peak) * (options.k2 * options.peak);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!inside[i]) continue;
    const double mu_a = sa[i] / sm[i];
    const double mu_b = sb[i] / sm[i];
    const double var_a = saa[i] / sm[i] - mu_a * mu_a;
    const double var_b = sbb[i] / sm[i] - mu_b * mu_b;
    const double cov = sab[i] / sm[i] - mu_a * mu_b;
    const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
    const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
    total += num / den;
    ++count;
  }
  if (count == 0) throw Error(Errc::EmptyDisk, "no in-disk pixels to compare");
  return total / static_cast<double>(count);
}

EvalRecord evaluate_pair(const SolarImage& cleaned, const SolarImage& target) {
  return {psnr(cleaned, target), ssim(cleaned, target), rmse(cleaned, target)};
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const auto infinite = std::count_if(values.begin(), values.end(), [](double v) { return std::isinf(v); });
  if (infinite > 0) {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, static_cast<std::size_t>(infinite) == values.size() ? 0.0 : inf};
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

AggregateRecord aggregate(std::span<const EvalRecord> records) {
  std::vector<double> p, s, r;
  for (const auto& rec : records) {
    p.push_back(rec.psnr);
    s.push_back(rec.ssim);
    r.push_back(rec.rmse);
  }
  return {summarize(p), summarize(s), summarize(r), records.size()};
}

}  // namespace heliosweep
