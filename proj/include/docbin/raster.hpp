#ifndef DOCBIN_RASTER_HPP
#define DOCBIN_RASTER_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "docbin/image.hpp"

namespace docbin {

struct Histogram {
  std::array<uint64_t, 256> bins{};
  uint64_t total = 0;

  bool operator==(const Histogram&) const = default;
};

inline Histogram histogram(const GrayImage& img) {
  Histogram h;
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* src = img.row(y);
    for (int x = 0; x < img.width(); ++x) ++h.bins[src[x]];
  }
  h.total = img.pixel_count();
  return h;
}

inline int populated_bins(const Histogram& h) {
  int n = 0;
  for (uint64_t b : h.bins)
    if (b > 0) ++n;
  return n;
}

// Prefix-sum planes of intensity and squared intensity, zero-padded so that
// sum(x0,y0,x1,y1) reads the total over the half-open window in O(1).
class IntegralImages {
 public:
  explicit IntegralImages(const GrayImage& img) : width_(img.width()), height_(img.height()) {
    const size_t stride = static_cast<size_t>(width_) + 1;
    sum_.assign(stride * (height_ + 1), 0);
    sq_.assign(stride * (height_ + 1), 0);
    for (int y = 0; y < height_; ++y) {
      const uint8_t* src = img.row(y);
      uint64_t row_sum = 0;
      uint64_t row_sq = 0;
      uint64_t* s = sum_.data() + (y + 1) * stride;
      uint64_t* q = sq_.data() + (y + 1) * stride;
      const uint64_t* s_up = sum_.data() + y * stride;
      const uint64_t* q_up = sq_.data() + y * stride;
      for (int x = 0; x < width_; ++x) {
        const uint64_t v = src[x];
        row_sum += v;
        row_sq += v * v;
        s[x + 1] = s_up[x + 1] + row_sum;
        q[x + 1] = q_up[x + 1] + row_sq;
      }
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }

  uint64_t sum(int x0, int y0, int x1, int y1) const { return rect(sum_, x0, y0, x1, y1); }
  uint64_t sq_sum(int x0, int y0, int x1, int y1) const { return rect(sq_, x0, y0, x1, y1); }

  // Raw plane access (row y, column x of the (w+1)x(h+1) padded grid).
  uint64_t sum_at(int x, int y) const { return sum_[static_cast<size_t>(y) * (width_ + 1) + x]; }
  uint64_t sq_at(int x, int y) const { return sq_[static_cast<size_t>(y) * (width_ + 1) + x]; }

 private:
  uint64_t rect(const std::vector<uint64_t>& p, int x0, int y0, int x1, int y1) const {
    const size_t stride = static_cast<size_t>(width_) + 1;
    return p[static_cast<size_t>(y1) * stride + x1] - p[static_cast<size_t>(y0) * stride + x1] -
           p[static_cast<size_t>(y1) * stride + x0] + p[static_cast<size_t>(y0) * stride + x0];
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<uint64_t> sum_;
  std::vector<uint64_t> sq_;
};

inline IntegralImages integral(const GrayImage& img) { return IntegralImages(img); }

struct MeanStd {
  double mean = 0;
  double stddev = 0;
};

namespace detail {

// Window of odd side `window` centered at (x, y), clamped to the image.
struct WindowBounds {
  int x0, y0, x1, y1;  // half-open
  int count() const { return (x1 - x0) * (y1 - y0); }
};

inline WindowBounds clamp_window(int x, int y, int window, int width, int height) {
  const int r = window / 2;
  WindowBounds b;
  b.x0 = x - r < 0 ? 0 : x - r;
  b.y0 = y - r < 0 ? 0 : y - r;
  b.x1 = x + r + 1 > width ? width : x + r + 1;
  b.y1 = y + r + 1 > height ? height : y + r + 1;
  return b;
}

inline MeanStd mean_std_from_sums(uint64_t sum, uint64_t sq, int count) {
  MeanStd ms;
  ms.mean = static_cast<double>(sum) / count;
  double var = static_cast<double>(sq) / count - ms.mean * ms.mean;
  if (var < 0) var = 0;  // rounding can push tiny negatives
  ms.stddev = std::sqrt(var);
  return ms;
}

}  // namespace detail

// Population mean / standard deviation of the clamped window around (x, y).
inline MeanStd local_mean_std(const IntegralImages& ii, int x, int y, int window) {
  if (window < 1 || window % 2 == 0) throw InvalidParams("local_mean_std: window must be odd and >= 1");
  if (x < 0 || y < 0 || x >= ii.width() || y >= ii.height())
    throw InvalidParams("local_mean_std: center outside image");
  const auto b = detail::clamp_window(x, y, window, ii.width(), ii.height());
  return detail::mean_std_from_sums(ii.sum(b.x0, b.y0, b.x1, b.y1), ii.sq_sum(b.x0, b.y0, b.x1, b.y1),
                                    b.count());
}

struct ComponentSet {
  std::vector<int32_t> labels;   // per pixel, 0 = background
  std::vector<uint64_t> sizes;   // indexed by component id, sizes[0] == 0
  int count = 0;

  int32_t label(int x, int y, int width) const { return labels[static_cast<size_t>(y) * width + x]; }
};

// Two-pass 8-connected labeling with union-find; final ids follow the
// raster-scan order of each component's first pixel.
inline ComponentSet connected_components(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  ComponentSet cs;
  cs.labels.assign(static_cast<size_t>(w) * h, 0);

  std::vector<int32_t> parent(1, 0);
  auto find = [&parent](int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&parent, &find](int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // keep the smaller provisional label as root
  };

  for (int y = 0; y < h; ++y) {
    const uint8_t* src = img.row(y);
    for (int x = 0; x < w; ++x) {
      if (!src[x]) continue;
      // Already-visited 8-neighbours: W, NW, N, NE.
      int32_t neigh[4];
      int n = 0;
      if (x > 0 && cs.labels[static_cast<size_t>(y) * w + x - 1]) neigh[n++] = cs.labels[static_cast<size_t>(y) * w + x - 1];
      if (y > 0) {
        const size_t up = static_cast<size_t>(y - 1) * w;
        if (x > 0 && cs.labels[up + x - 1]) neigh[n++] = cs.labels[up + x - 1];
        if (cs.labels[up + x]) neigh[n++] = cs.labels[up + x];
        if (x + 1 < w && cs.labels[up + x + 1]) neigh[n++] = cs.labels[up + x + 1];
      }
      int32_t label;
      if (n == 0) {
        label = static_cast<int32_t>(parent.size());
        parent.push_back(label);
      } else {
        label = neigh[0];
        for (int i = 1; i < n; ++i) label = std::min(label, neigh[i]);
        for (int i = 0; i < n; ++i) unite(label, neigh[i]);
      }
      cs.labels[static_cast<size_t>(y) * w + x] = label;
    }
  }

  // Second pass: resolve equivalences and compact ids in first-pixel order.
  std::vector<int32_t> compact(parent.size(), 0);
  cs.sizes.assign(1, 0);
  for (size_t i = 0; i < cs.labels.size(); ++i) {
    if (!cs.labels[i]) continue;
    const int32_t root = find(cs.labels[i]);
    if (!compact[root]) {
      compact[root] = ++cs.count;
      cs.sizes.push_back(0);
    }
    cs.labels[i] = compact[root];
    ++cs.sizes[cs.labels[i]];
  }
  return cs;
}

}  // namespace docbin

#endif  // DOCBIN_RASTER_HPP
