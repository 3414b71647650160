#ifndef DOCBIN_THRESHOLD_LOCAL_HPP
#define DOCBIN_THRESHOLD_LOCAL_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "docbin/raster.hpp"

namespace docbin {

enum class PixelClass { foreground, background };

// How window statistics are gathered: integral-image acceleration (O(1)
// per pixel) or literal per-window scans. Both produce identical masks;
// the naive engine's cost grows with the window area.
enum class WindowEngine { integral, naive };

struct LocalParams {
  int window = 15;                  // odd side length
  double k = 0.5;                   // method factor
  double r = 128.0;                 // Sauvola dynamic range
  int bernsen_contrast_min = 15;    // Bernsen low-contrast cutoff
  PixelClass bernsen_low_contrast_class = PixelClass::background;

  bool operator==(const LocalParams&) const = default;
};

namespace detail {

inline void validate_local(const LocalParams& p) {
  if (p.window < 3 || p.window % 2 == 0) throw InvalidParams("local threshold: window must be odd and >= 3");
  if (p.r <= 0) throw InvalidParams("local threshold: r must be positive");
}

inline MeanStd window_mean_std_naive(const GrayImage& img, int x, int y, int window) {
  const auto b = clamp_window(x, y, window, img.width(), img.height());
  uint64_t sum = 0;
  uint64_t sq = 0;
  for (int yy = b.y0; yy < b.y1; ++yy) {
    const uint8_t* row = img.row(yy);
    for (int xx = b.x0; xx < b.x1; ++xx) {
      const uint64_t v = row[xx];
      sum += v;
      sq += v * v;
    }
  }
  return mean_std_from_sums(sum, sq, b.count());
}

// Threshold every pixel of `region` from clamped-window mean/std; windows
// draw context from the whole image, so a patch matches the corresponding
// crop of a full-image run.
template <typename ThresholdFn>
inline BinaryImage mean_std_pass(const GrayImage& img, const Rect& region, const LocalParams& p,
                                 WindowEngine engine, ThresholdFn threshold_of,
                                 const IntegralImages* prebuilt) {
  validate_local(p);
  if (!img.contains(region)) throw RegionOutOfBounds("local threshold: region outside image");

  std::optional<IntegralImages> own;
  const IntegralImages* ii = nullptr;
  if (engine == WindowEngine::integral) ii = prebuilt ? prebuilt : &own.emplace(img);

  BinaryImage out(region.width, region.height);
  for (int y = region.y; y < region.y + region.height; ++y) {
    const uint8_t* src = img.row(y);
    uint8_t* dst = out.row(y - region.y);
    for (int x = region.x; x < region.x + region.width; ++x) {
      MeanStd ms;
      if (ii) {
        const auto b = clamp_window(x, y, p.window, img.width(), img.height());
        ms = mean_std_from_sums(ii->sum(b.x0, b.y0, b.x1, b.y1), ii->sq_sum(b.x0, b.y0, b.x1, b.y1),
                                b.count());
      } else {
        ms = window_mean_std_naive(img, x, y, p.window);
      }
      dst[x - region.x] = src[x] <= threshold_of(ms) ? 1 : 0;
    }
  }
  return out;
}

// 1D sliding min/max over a strided sequence with border-clamped windows,
// monotonic-deque style.
template <typename Cmp>
inline void sliding_extreme_1d(const uint8_t* src, size_t stride, int n, int radius, uint8_t* dst,
                               size_t dst_stride, Cmp dominates) {
  std::deque<int> dq;
  int next = 0;
  for (int out = 0; out < n; ++out) {
    const int hi = out + radius < n - 1 ? out + radius : n - 1;
    while (next <= hi) {
      const uint8_t v = src[static_cast<size_t>(next) * stride];
      while (!dq.empty() && !dominates(src[static_cast<size_t>(dq.back()) * stride], v)) dq.pop_back();
      dq.push_back(next);
      ++next;
    }
    while (dq.front() < out - radius) dq.pop_front();
    dst[static_cast<size_t>(out) * dst_stride] = src[static_cast<size_t>(dq.front()) * stride];
  }
}

// Window min and max planes for the whole image (separable two-pass filter).
inline void sliding_minmax(const GrayImage& img, int window, std::vector<uint8_t>& mn,
                           std::vector<uint8_t>& mx) {
  const int w = img.width();
  const int h = img.height();
  const int r = window / 2;
  std::vector<uint8_t> row_mn(static_cast<size_t>(w) * h);
  std::vector<uint8_t> row_mx(static_cast<size_t>(w) * h);
  auto lt = [](uint8_t a, uint8_t b) { return a < b; };
  auto gt = [](uint8_t a, uint8_t b) { return a > b; };
  for (int y = 0; y < h; ++y) {
    sliding_extreme_1d(img.row(y), 1, w, r, row_mn.data() + static_cast<size_t>(y) * w, 1, lt);
    sliding_extreme_1d(img.row(y), 1, w, r, row_mx.data() + static_cast<size_t>(y) * w, 1, gt);
  }
  mn.resize(static_cast<size_t>(w) * h);
  mx.resize(static_cast<size_t>(w) * h);
  for (int x = 0; x < w; ++x) {
    sliding_extreme_1d(row_mn.data() + x, w, h, r, mn.data() + x, w, lt);
    sliding_extreme_1d(row_mx.data() + x, w, h, r, mx.data() + x, w, gt);
  }
}

inline void window_minmax_naive(const GrayImage& img, int x, int y, int window, int& lo, int& hi) {
  const auto b = clamp_window(x, y, window, img.width(), img.height());
  lo = 255;
  hi = 0;
  for (int yy = b.y0; yy < b.y1; ++yy) {
    const uint8_t* row = img.row(yy);
    for (int xx = b.x0; xx < b.x1; ++xx) {
      const int v = row[xx];
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
}

}  // namespace detail

// Niblack: T = m + k*s.
inline BinaryImage niblack(const GrayImage& img, const LocalParams& p,
                           WindowEngine engine = WindowEngine::integral) {
  return detail::mean_std_pass(
      img, Rect{0, 0, img.width(), img.height()}, p, engine,
      [&p](const MeanStd& ms) { return ms.mean + p.k * ms.stddev; }, nullptr);
}

// Sauvola: T = m * (1 - k * (1 - s/R)).
inline BinaryImage sauvola(const GrayImage& img, const LocalParams& p,
                           WindowEngine engine = WindowEngine::integral) {
  return detail::mean_std_pass(
      img, Rect{0, 0, img.width(), img.height()}, p, engine,
      [&p](const MeanStd& ms) { return ms.mean * (1.0 - p.k * (1.0 - ms.stddev / p.r)); }, nullptr);
}

namespace detail {

// Nick: T = m + k * sqrt(sum(p_i^2 - m^2)/NP). The radicand reduces to
// E[p^2] - m^2, i.e. the population variance of the window.
inline BinaryImage nick_pass(const GrayImage& img, const Rect& region, const LocalParams& p,
                             WindowEngine engine, const IntegralImages* prebuilt) {
  return mean_std_pass(
      img, region, p, engine, [&p](const MeanStd& ms) { return ms.mean + p.k * ms.stddev; }, prebuilt);
}

}  // namespace detail

inline BinaryImage nick(const GrayImage& img, const LocalParams& p,
                        WindowEngine engine = WindowEngine::integral) {
  return detail::nick_pass(img, Rect{0, 0, img.width(), img.height()}, p, engine, nullptr);
}

// Nick restricted to `region`; returns the region-sized patch.
inline BinaryImage nick_region(const GrayImage& img, const Rect& region, const LocalParams& p,
                               WindowEngine engine = WindowEngine::integral) {
  return detail::nick_pass(img, region, p, engine, nullptr);
}

// Overload reusing an already-built integral image (one second-pass caller
// may touch many regions of the same input).
inline BinaryImage nick_region(const GrayImage& img, const Rect& region, const LocalParams& p,
                               const IntegralImages& ii) {
  return detail::nick_pass(img, region, p, WindowEngine::integral, &ii);
}

// Bernsen: T = (max+min)/2 when the window contrast reaches
// bernsen_contrast_min; low-contrast windows take the configured class.
inline BinaryImage bernsen(const GrayImage& img, const LocalParams& p,
                           WindowEngine engine = WindowEngine::integral) {
  detail::validate_local(p);
  const int w = img.width();
  const int h = img.height();
  BinaryImage out(w, h);
  const bool low_is_fg = p.bernsen_low_contrast_class == PixelClass::foreground;

  if (engine == WindowEngine::integral) {
    std::vector<uint8_t> mn, mx;
    detail::sliding_minmax(img, p.window, mn, mx);
    for (int y = 0; y < h; ++y) {
      const uint8_t* src = img.row(y);
      const uint8_t* lo = mn.data() + static_cast<size_t>(y) * w;
      const uint8_t* hi = mx.data() + static_cast<size_t>(y) * w;
      uint8_t* dst = out.row(y);
      for (int x = 0; x < w; ++x) {
        const int c = hi[x] - lo[x];
        if (c < p.bernsen_contrast_min)
          dst[x] = low_is_fg ? 1 : 0;
        else
          dst[x] = src[x] <= (hi[x] + lo[x]) / 2 ? 1 : 0;
      }
    }
  } else {
    for (int y = 0; y < h; ++y) {
      const uint8_t* src = img.row(y);
      uint8_t* dst = out.row(y);
      for (int x = 0; x < w; ++x) {
        int lo, hi;
        detail::window_minmax_naive(img, x, y, p.window, lo, hi);
        const int c = hi - lo;
        if (c < p.bernsen_contrast_min)
          dst[x] = low_is_fg ? 1 : 0;
        else
          dst[x] = src[x] <= (hi + lo) / 2 ? 1 : 0;
      }
    }
  }
  return out;
}

}  // namespace docbin

#endif  // DOCBIN_THRESHOLD_LOCAL_HPP
