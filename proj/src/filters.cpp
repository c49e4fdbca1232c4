#include "heliosweep/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "heliosweep/error.hpp"

namespace heliosweep {
namespace {

constexpr int kBlock = 64;

/// Two-level histogram over value ranks with a lazily moving order-statistic cursor.
class RankHistogram {
 public:
  explicit RankHistogram(int ranks)
      : fine_(static_cast<std::size_t>(ranks), 0), coarse_(static_cast<std::size_t>(ranks / kBlock + 1), 0) {}

  void add(int r) { update(r, +1); }
  void remove(int r) { update(r, -1); }
  int count() const noexcept { return count_; }

  /// Rank holding the t-th smallest element (0-based).
  int select(int t) {
    while (below_ > t) {
      if (pos_ % kBlock == 0 && pos_ >= kBlock && below_ - coarse_[pos_ / kBlock - 1] > t) {
        pos_ -= kBlock;
        below_ -= coarse_[pos_ / kBlock];
      } else {
        --pos_;
        below_ -= fine_[pos_];
      }
    }
    while (below_ + fine_[pos_] <= t) {
      if (pos_ % kBlock == 0 && below_ + coarse_[pos_ / kBlock] <= t) {
        below_ += coarse_[pos_ / kBlock];
        pos_ += kBlock;
      } else {
        below_ += fine_[pos_];
        ++pos_;
      }
    }
    return pos_;
  }

 private:
  void update(int r, int delta) {
    fine_[r] += delta;
    coarse_[r / kBlock] += delta;
    count_ += delta;
    if (r < pos_) below_ += delta;
  }

  std::vector<int> fine_;
  std::vector<int> coarse_;
  int count_ = 0;
  int pos_ = 0;
  int below_ = 0;  // elements with rank < pos_
};

void check_support(const Plane& in, std::span<const std::uint8_t> support) {
  if (support.size() != in.size()) throw Error(Errc::ShapeMismatch, "support does not match plane");
}

/// Running min (or max) over [x - w, x + w] of one row, van Herk / Gil-Werman.
template <typename Op>
void running_extreme(std::span<const float> row, int w, float neutral, Op op, std::span<float> out) {
  const int n = static_cast<int>(row.size());
  const int k = 2 * w + 1;
  const int padded = n + 2 * w;
  const int len = (padded + k - 1) / k * k;
  std::vector<float> src(static_cast<std::size_t>(len), neutral);
  std::copy(row.begin(), row.end(), src.begin() + w);
  std::vector<float> g(src.size());
  std::vector<float> h(src.size());
  for (int b = 0; b < len; b += k) {
    g[b] = src[b];
    for (int i = 1; i < k; ++i) g[b + i] = op(g[b + i - 1], src[b + i]);
    h[b + k - 1] = src[b + k - 1];
    for (int i = k - 2; i >= 0; --i) h[b + i] = op(h[b + i + 1], src[b + i]);
  }
  // Window over padded indices [x, x + 2w] for output x.
  for (int x = 0; x < n; ++x) out[x] = op(h[x], g[x + 2 * w]);
}

template <typename Op>
Plane masked_extreme(const Plane& in, std::span<const std::uint8_t> support, int radius, float neutral, Op op) {
  check_support(in, support);
  if (radius < 0) throw Error(Errc::InvalidArgument, "negative structuring element radius");
  const int w = in.width();
  const int h = in.height();

  Plane masked(w, h, neutral);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (support[i]) masked.data()[i] = in.data()[i];
  }

  std::vector<int> half_width(static_cast<std::size_t>(radius) + 1);
  for (int dy = 0; dy <= radius; ++dy) {
    half_width[dy] = static_cast<int>(std::floor(std::sqrt(static_cast<double>(radius) * radius - dy * dy) + 1e-9));
  }

  std::map<int, Plane> row_pass;
  for (int hw : half_width) {
    if (row_pass.contains(hw)) continue;
    Plane pass(w, h);
    for (int y = 0; y < h; ++y) {
      running_extreme(masked.data().subspan(static_cast<std::size_t>(y) * w, w), hw, neutral, op,
                      pass.data().subspan(static_cast<std::size_t>(y) * w, w));
    }
    row_pass.emplace(hw, std::move(pass));
  }

  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!support[static_cast<std::size_t>(y) * w + x]) continue;
      float acc = neutral;
      for (int dy = -radius; dy <= radius; ++dy) {
        const int yy = y + dy;
        if (yy < 0 || yy >= h) continue;
        acc = op(acc, row_pass.at(half_width[std::abs(dy)])(x, yy));
      }
      out(x, y) = acc;
    }
  }
  return out;
}

struct MinOp {
  float operator()(float a, float b) const { return std::min(a, b); }
};
struct MaxOp {
  float operator()(float a, float b) const { return std::max(a, b); }
};

}  // namespace

Plane masked_median(const Plane& in, std::span<const std::uint8_t> support, int window) {
  check_support(in, support);
  if (window < 1 || window % 2 == 0) throw Error(Errc::InvalidArgument, "median window must be odd and positive");
  const int w = in.width();
  const int h = in.height();
  const int half = window / 2;

  // Compress in-support values to dense ranks.
  std::vector<float> values;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (support[i]) values.push_back(in.data()[i]);
  }
  Plane out(w, h);
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<int> rank(in.size(), -1);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (support[i]) {
      rank[i] = static_cast<int>(std::lower_bound(values.begin(), values.end(), in.data()[i]) - values.begin());
    }
  }

  RankHistogram hist(static_cast<int>(values.size()));
  auto touch = [&](int x, int y, bool add) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    const int r = rank[static_cast<std::size_t>(y) * w + x];
    if (r < 0) return;
    add ? hist.add(r) : hist.remove(r);
  };
  auto emit = [&](int x, int y) {
    if (!support[static_cast<std::size_t>(y) * w + x]) return;
    const int n = hist.count();
    if (n % 2 == 1) {
      out(x, y) = values[hist.select(n / 2)];
    } else {
      const double lo = values[hist.select(n / 2 - 1)];
      const double hi = values[hist.select(n / 2)];
      out(x, y) = static_cast<float>(0.5 * (lo + hi));
    }
  };

  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) touch(dx, dy, true);
  }
  // Serpentine scan: each step moves the window by one pixel.
  int x = 0;
  for (int y = 0; y < h; ++y) {
    const bool forward = y % 2 == 0;
    for (int step = 0; step < w; ++step) {
      emit(x, y);
      if (step + 1 == w) break;
      const int nx = forward ? x + 1 : x - 1;
      const int leaving = forward ? x - half : x + half;
      const int entering = forward ? nx + half : nx - half;
      for (int dy = -half; dy <= half; ++dy) {
        touch(leaving, y + dy, false);
        touch(entering, y + dy, true);
      }
      x = nx;
    }
    if (y + 1 < h) {
      for (int dx = -half; dx <= half; ++dx) {
        touch(x + dx, y - half, false);
        touch(x + dx, y + 1 + half, true);
      }
    }
  }
  return out;
}

Plane masked_erode(const Plane& in, std::span<const std::uint8_t> support, int radius) {
  return masked_extreme(in, support, radius, std::numeric_limits<float>::infinity(), MinOp{});
}

Plane masked_dilate(const Plane& in, std::span<const std::uint8_t> support, int radius) {
  return masked_extreme(in, support, radius, -std::numeric_limits<float>::infinity(), MaxOp{});
}

Plane masked_close(const Plane& in, std::span<const std::uint8_t> support, int radius) {
  return masked_erode(masked_dilate(in, support, radius), support, radius);
}

Plane masked_open(const Plane& in, std::span<const std::uint8_t> support, int radius) {
  return masked_dilate(masked_erode(in, support, radius), support, radius);
}

double masked_quantile(const Plane& in, std::span<const std::uint8_t> support, double q) {
  check_support(in, support);
  std::vector<double> values;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (support[i]) values.push_back(in.data()[i]);
  }
  if (values.empty()) throw Error(Errc::EmptyDisk, "no in-support pixels");
  q = std::clamp(q, 0.0, 1.0);
  const double pos = q * (values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  std::nth_element(values.begin(), values.begin() + lo, values.end());
  const double a = values[lo];
  if (hi == lo) return a;
  const double b = *std::min_element(values.begin() + lo + 1, values.end());
  return a + (b - a) * (pos - lo);
}

}  // namespace heliosweep
