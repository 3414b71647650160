#ifndef DOCBIN_THRESHOLD_GLOBAL_HPP
#define DOCBIN_THRESHOLD_GLOBAL_HPP

#include <array>
#include <cstdint>

#include "docbin/raster.hpp"

namespace docbin {

struct OtsuResult {
  int threshold = 0;
  double between_class_variance = 0;
  bool degenerate = false;  // all mass in a single bin
};

struct TsmoResult {
  int t_o1 = 0;
  int t_o2 = 0;
  double between_class_variance = 0;
};

namespace detail {

// Inclusive prefix counts and intensity sums: cnt(t) = number of pixels
// with value <= t, sum(t) = their intensity total.
struct HistPrefix {
  std::array<uint64_t, 257> cnt{};
  std::array<uint64_t, 257> sum{};
  uint64_t total = 0;

  explicit HistPrefix(const Histogram& h) {
    cnt[0] = 0;
    sum[0] = 0;
    for (int v = 0; v < 256; ++v) {
      cnt[v + 1] = cnt[v] + h.bins[v];
      sum[v + 1] = sum[v] + h.bins[v] * static_cast<uint64_t>(v);
    }
    total = cnt[256];
  }

  uint64_t count_le(int t) const { return cnt[t + 1]; }
  uint64_t sum_le(int t) const { return sum[t + 1]; }
};

// Two-class between-class variance for classes {p <= t} and {p > t}.
inline double variance2(const HistPrefix& p, int t) {
  const uint64_t n0 = p.count_le(t);
  const uint64_t n1 = p.total - n0;
  if (n0 == 0 || n1 == 0) return 0;
  const double w0 = static_cast<double>(n0) / static_cast<double>(p.total);
  const double w1 = static_cast<double>(n1) / static_cast<double>(p.total);
  const double mu0 = static_cast<double>(p.sum_le(t)) / static_cast<double>(n0);
  const double mu1 = static_cast<double>(p.sum[256] - p.sum_le(t)) / static_cast<double>(n1);
  const double d = mu0 - mu1;
  return w0 * w1 * d * d;
}

// Three-class between-class variance for {p <= t1}, {t1 < p <= t2}, {p > t2}.
inline double variance3(const HistPrefix& p, int t1, int t2) {
  const uint64_t n[3] = {p.count_le(t1), p.count_le(t2) - p.count_le(t1), p.total - p.count_le(t2)};
  const uint64_t s[3] = {p.sum_le(t1), p.sum_le(t2) - p.sum_le(t1), p.sum[256] - p.sum_le(t2)};
  const double mu = static_cast<double>(p.sum[256]) / static_cast<double>(p.total);
  double v = 0;
  for (int k = 0; k < 3; ++k) {
    if (n[k] == 0) continue;
    const double w = static_cast<double>(n[k]) / static_cast<double>(p.total);
    const double m = static_cast<double>(s[k]) / static_cast<double>(n[k]);
    const double d = m - mu;
    v += w * d * d;
  }
  return v;
}

}  // namespace detail

// Otsu's threshold: smallest t in [0,255] maximizing w0*w1*(mu0-mu1)^2.
// A single-bin histogram is flagged degenerate and returns that bin.
inline OtsuResult otsu(const Histogram& hist) {
  if (hist.total == 0) throw InvalidParams("otsu: empty histogram");
  if (populated_bins(hist) == 1) {
    OtsuResult r;
    for (int v = 0; v < 256; ++v)
      if (hist.bins[v]) r.threshold = v;
    r.between_class_variance = 0;
    r.degenerate = true;
    return r;
  }
  const detail::HistPrefix p(hist);
  OtsuResult best;
  best.threshold = 0;
  best.between_class_variance = detail::variance2(p, 0);
  for (int t = 1; t < 256; ++t) {
    const double v = detail::variance2(p, t);
    if (v > best.between_class_variance) {
      best.between_class_variance = v;
      best.threshold = t;
    }
  }
  return best;
}

// Two-stage multilevel Otsu producing t_o1 < t_o2. Stage one scans pairs of
// group boundaries over a coarse grouping of the 256 bins; stage two
// refines exhaustively inside the two winning groups. Ties resolve toward
// the smallest (t_o1, then t_o2).
inline TsmoResult tsmo(const Histogram& hist, int groups = 32) {
  if (hist.total == 0) throw InvalidParams("tsmo: empty histogram");
  if (groups < 2 || 256 % groups != 0) throw InvalidParams("tsmo: groups must divide 256 and be >= 2");
  if (populated_bins(hist) < 2) throw DegenerateHistogram("tsmo: fewer than 2 populated bins");

  const detail::HistPrefix p(hist);
  const int gsize = 256 / groups;

  // Stage 1: boundary-aligned pairs (classes are whole groups).
  int best_ga = 0;
  int best_gb = 1;
  double best_v = -1;
  for (int ga = 0; ga + 1 < groups; ++ga) {
    const int t1 = ga * gsize + gsize - 1;
    for (int gb = ga + 1; gb < groups; ++gb) {
      const int t2 = gb * gsize + gsize - 1;
      const double v = detail::variance3(p, t1, t2);
      if (v > best_v) {
        best_v = v;
        best_ga = ga;
        best_gb = gb;
      }
    }
  }

  // Stage 2: exhaustive refinement inside the winning groups' bin ranges.
  TsmoResult best;
  best.between_class_variance = -1;
  for (int t1 = best_ga * gsize; t1 < (best_ga + 1) * gsize; ++t1) {
    for (int t2 = best_gb * gsize; t2 < (best_gb + 1) * gsize; ++t2) {
      if (t1 >= t2) continue;
      const double v = detail::variance3(p, t1, t2);
      if (v > best.between_class_variance) {
        best.between_class_variance = v;
        best.t_o1 = t1;
        best.t_o2 = t2;
      }
    }
  }
  return best;
}

// Pixels at or below t become foreground.
inline BinaryImage apply_threshold(const GrayImage& img, int t) {
  if (t < 0 || t > 255) throw InvalidParams("apply_threshold: t must be in [0,255]");
  BinaryImage out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* src = img.row(y);
    uint8_t* dst = out.row(y);
    for (int x = 0; x < img.width(); ++x) dst[x] = src[x] <= t ? 1 : 0;
  }
  return out;
}

}  // namespace docbin

#endif  // DOCBIN_THRESHOLD_GLOBAL_HPP
