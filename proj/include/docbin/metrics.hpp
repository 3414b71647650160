#ifndef DOCBIN_METRICS_HPP
#define DOCBIN_METRICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "docbin/image.hpp"

namespace docbin {

struct Confusion {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  uint64_t tn = 0;
};

namespace detail {

inline void require_same_dims(const BinaryImage& a, const BinaryImage& b, const char* who) {
  if (a.width() != b.width() || a.height() != b.height())
    throw DimensionMismatch(std::string(who) + ": image dimensions differ");
}

}  // namespace detail

// Pixel counts with foreground as the positive class.
inline Confusion confusion(const BinaryImage& bin, const BinaryImage& gt) {
  detail::require_same_dims(bin, gt, "confusion");
  Confusion c;
  for (int y = 0; y < bin.height(); ++y) {
    const uint8_t* b = bin.row(y);
    const uint8_t* g = gt.row(y);
    for (int x = 0; x < bin.width(); ++x) {
      if (b[x] && g[x])
        ++c.tp;
      else if (b[x] && !g[x])
        ++c.fp;
      else if (!b[x] && g[x])
        ++c.fn;
      else
        ++c.tn;
    }
  }
  return c;
}

// Harmonic mean of precision and recall, in percent. Zero when nothing was
// correctly detected.
inline double f_measure(const Confusion& c) {
  if (c.tp == 0) return 0;
  const double recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  const double precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  return 100.0 * 2.0 * recall * precision / (recall + precision);
}

// 5x5 inverse-distance weights with zero center, normalized to sum 1.
struct DrdWeights {
  std::array<std::array<double, 5>, 5> w{};

  static const DrdWeights& get() {
    static const DrdWeights inst = make();
    return inst;
  }

  static DrdWeights make() {
    DrdWeights d;
    double total = 0;
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const double v = (i == 0 && j == 0) ? 0.0 : 1.0 / std::sqrt(static_cast<double>(i * i + j * j));
        d.w[i + 2][j + 2] = v;
        total += v;
      }
    }
    for (auto& row : d.w)
      for (double& v : row) v /= total;
    return d;
  }
};

// Count of grid-aligned 8x8 blocks (partial edge blocks included) holding
// both foreground and background.
inline int nubn(const BinaryImage& gt) {
  int count = 0;
  for (int by = 0; by < gt.height(); by += 8) {
    const int y1 = by + 8 < gt.height() ? by + 8 : gt.height();
    for (int bx = 0; bx < gt.width(); bx += 8) {
      const int x1 = bx + 8 < gt.width() ? bx + 8 : gt.width();
      bool has_fg = false;
      bool has_bg = false;
      for (int y = by; y < y1 && !(has_fg && has_bg); ++y) {
        const uint8_t* row = gt.row(y);
        for (int x = bx; x < x1; ++x) {
          if (row[x])
            has_fg = true;
          else
            has_bg = true;
          if (has_fg && has_bg) break;
        }
      }
      if (has_fg && has_bg) ++count;
    }
  }
  return count;
}

// Distance reciprocal distortion: every flipped pixel accumulates the
// weighted count of disagreeing ground-truth values in its 5x5
// neighbourhood (border-clamped), normalized by NUBN.
inline double drd(const BinaryImage& bin, const BinaryImage& gt) {
  detail::require_same_dims(bin, gt, "drd");
  if (bin == gt) return 0;
  const int blocks = nubn(gt);
  if (blocks == 0) throw UndefinedDistortion("drd: uniform ground truth with differing prediction");

  const DrdWeights& wts = DrdWeights::get();
  const int w = gt.width();
  const int h = gt.height();
  double total = 0;
  for (int y = 0; y < h; ++y) {
    const uint8_t* b = bin.row(y);
    const uint8_t* g = gt.row(y);
    for (int x = 0; x < w; ++x) {
      if (b[x] == g[x]) continue;
      const double bv = b[x] ? 1.0 : 0.0;
      double dk = 0;
      for (int i = -2; i <= 2; ++i) {
        int yy = y + i;
        yy = yy < 0 ? 0 : (yy >= h ? h - 1 : yy);
        const uint8_t* grow = gt.row(yy);
        for (int j = -2; j <= 2; ++j) {
          int xx = x + j;
          xx = xx < 0 ? 0 : (xx >= w ? w - 1 : xx);
          const double gv = grow[xx] ? 1.0 : 0.0;
          dk += std::abs(bv - gv) * wts.w[i + 2][j + 2];
        }
      }
      total += dk;
    }
  }
  return total / blocks;
}

// PSNR over {0,1} pixel values (MAX = 1): MSE is the differing fraction.
// Identical images return +infinity.
inline double psnr(const BinaryImage& bin, const BinaryImage& gt) {
  detail::require_same_dims(bin, gt, "psnr");
  uint64_t differ = 0;
  for (int y = 0; y < bin.height(); ++y) {
    const uint8_t* b = bin.row(y);
    const uint8_t* g = gt.row(y);
    for (int x = 0; x < bin.width(); ++x) differ += b[x] != g[x];
  }
  if (differ == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(bin.pixel_count()) / static_cast<double>(differ));
}

namespace detail {

// Zhang-Suen parallel thinning to a 1-pixel skeleton.
inline BinaryImage thin_skeleton(const BinaryImage& in) {
  BinaryImage img = in;
  const int w = img.width();
  const int h = img.height();
  auto at = [&img, w, h](int x, int y) -> int {
    return (x >= 0 && x < w && y >= 0 && y < h && img.fg(x, y)) ? 1 : 0;
  };
  std::vector<std::pair<int, int>> kill;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int phase = 0; phase < 2; ++phase) {
      kill.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!img.fg(x, y)) continue;
          // Neighbours clockwise from north.
          const int p2 = at(x, y - 1), p3 = at(x + 1, y - 1), p4 = at(x + 1, y);
          const int p5 = at(x + 1, y + 1), p6 = at(x, y + 1), p7 = at(x - 1, y + 1);
          const int p8 = at(x - 1, y), p9 = at(x - 1, y - 1);
          const int bsum = p2 + p3 + p4 + p5 + p6 + p7 + p8 + p9;
          if (bsum < 2 || bsum > 6) continue;
          const int ring[9] = {p2, p3, p4, p5, p6, p7, p8, p9, p2};
          int transitions = 0;
          for (int i = 0; i < 8; ++i) transitions += ring[i] == 0 && ring[i + 1] == 1;
          if (transitions != 1) continue;
          if (phase == 0) {
            if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
          } else {
            if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
          }
          kill.emplace_back(x, y);
        }
      }
      for (const auto& [x, y] : kill) img.set_fg(x, y, false);
      changed = changed || !kill.empty();
    }
  }
  return img;
}

// Chebyshev (8-connected) distance to the nearest pixel where `source`
// holds, via the classic two-pass chamfer scan. Pixels with no source
// anywhere keep a large sentinel.
inline std::vector<int> chebyshev_distance(const BinaryImage& img, bool source_fg) {
  const int w = img.width();
  const int h = img.height();
  const int inf = w + h + 2;
  std::vector<int> d(static_cast<size_t>(w) * h, inf);
  auto idx = [w](int x, int y) { return static_cast<size_t>(y) * w + x; };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (img.fg(x, y) == source_fg) d[idx(x, y)] = 0;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int best = d[idx(x, y)];
      if (x > 0) best = std::min(best, d[idx(x - 1, y)] + 1);
      if (y > 0) {
        best = std::min(best, d[idx(x, y - 1)] + 1);
        if (x > 0) best = std::min(best, d[idx(x - 1, y - 1)] + 1);
        if (x + 1 < w) best = std::min(best, d[idx(x + 1, y - 1)] + 1);
      }
      d[idx(x, y)] = best;
    }
  }
  for (int y = h - 1; y >= 0; --y) {
    for (int x = w - 1; x >= 0; --x) {
      int best = d[idx(x, y)];
      if (x + 1 < w) best = std::min(best, d[idx(x + 1, y)] + 1);
      if (y + 1 < h) {
        best = std::min(best, d[idx(x, y + 1)] + 1);
        if (x > 0) best = std::min(best, d[idx(x - 1, y + 1)] + 1);
        if (x + 1 < w) best = std::min(best, d[idx(x + 1, y + 1)] + 1);
      }
      d[idx(x, y)] = best;
    }
  }
  return d;
}

}  // namespace detail

// Skeleton-based pseudo F-measure. Pseudo-recall scores the prediction
// against the thinned ground-truth skeleton; pseudo-precision scores it
// against the ground truth dilated by half the median stroke width.
// Clamped to [0,1] and [0,2] respectively before the harmonic mean.
inline double pseudo_f_measure(const BinaryImage& bin, const BinaryImage& gt) {
  detail::require_same_dims(bin, gt, "pseudo_f_measure");
  const uint64_t gt_fg = gt.fg_count();
  if (gt_fg == 0) throw EmptyGroundTruth("pseudo_f_measure: ground truth has no foreground");

  const BinaryImage skel = detail::thin_skeleton(gt);
  const std::vector<int> dist_to_bg = detail::chebyshev_distance(gt, false);

  // Stroke width sampled at skeleton pixels: 2*d - 1 where d is the
  // distance from the centerline to the nearest background pixel.
  std::vector<int> widths;
  uint64_t skel_count = 0;
  uint64_t skel_hit = 0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      if (!skel.fg(x, y)) continue;
      ++skel_count;
      if (bin.fg(x, y)) ++skel_hit;
      const int d = dist_to_bg[static_cast<size_t>(y) * gt.width() + x];
      widths.push_back(2 * d - 1);
    }
  }

  int radius = 0;
  if (!widths.empty()) {
    const size_t mid = (widths.size() - 1) / 2;
    std::nth_element(widths.begin(), widths.begin() + mid, widths.end());
    radius = static_cast<int>(std::lround(widths[mid] / 2.0));
  }

  const std::vector<int> dist_to_fg = detail::chebyshev_distance(gt, true);
  uint64_t bin_count = 0;
  uint64_t bin_hit = 0;
  for (int y = 0; y < bin.height(); ++y) {
    for (int x = 0; x < bin.width(); ++x) {
      if (!bin.fg(x, y)) continue;
      ++bin_count;
      if (dist_to_fg[static_cast<size_t>(y) * bin.width() + x] <= radius) ++bin_hit;
    }
  }

  double recall_p = skel_count ? static_cast<double>(skel_hit) / static_cast<double>(skel_count) : 0;
  double precision_p = bin_count ? static_cast<double>(bin_hit) / static_cast<double>(bin_count) : 0;
  recall_p = std::clamp(recall_p, 0.0, 1.0);
  precision_p = std::clamp(precision_p, 0.0, 2.0);
  if (recall_p + precision_p == 0) return 0;
  return 100.0 * 2.0 * recall_p * precision_p / (recall_p + precision_p);
}

struct MethodRanking {
  std::string method;
  std::vector<int> ranks;  // one per criterion
  int score = 0;
};

// Rank-sum scoring. Per criterion, methods rank 1..n (ties share the
// minimum rank of the tied block); a method's score is the sum of its
// ranks. Output is sorted ascending by score (best first, stable).
inline std::vector<MethodRanking> rank_scores(const std::vector<std::string>& methods,
                                              const std::vector<std::vector<double>>& values,
                                              const std::vector<bool>& higher_better) {
  const size_t n = methods.size();
  const size_t criteria = higher_better.size();
  if (n < 2 || criteria < 1) throw EmptyTable("rank_scores: need >= 2 methods and >= 1 criterion");
  if (values.size() != n) throw InvalidParams("rank_scores: one value row per method required");
  for (const auto& row : values)
    if (row.size() != criteria) throw InvalidParams("rank_scores: ragged value rows");

  std::vector<MethodRanking> out(n);
  for (size_t m = 0; m < n; ++m) {
    out[m].method = methods[m];
    out[m].ranks.assign(criteria, 0);
  }
  for (size_t c = 0; c < criteria; ++c) {
    for (size_t m = 0; m < n; ++m) {
      int better = 0;
      for (size_t o = 0; o < n; ++o) {
        if (o == m) continue;
        const bool o_better = higher_better[c] ? values[o][c] > values[m][c] : values[o][c] < values[m][c];
        better += o_better;
      }
      out[m].ranks[c] = better + 1;
      out[m].score += better + 1;
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MethodRanking& a, const MethodRanking& b) { return a.score < b.score; });
  return out;
}

}  // namespace docbin

#endif  // DOCBIN_METRICS_HPP
