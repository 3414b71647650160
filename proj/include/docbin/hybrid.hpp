#ifndef DOCBIN_HYBRID_HPP
#define DOCBIN_HYBRID_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "docbin/enhance.hpp"
#include "docbin/threshold_global.hpp"
#include "docbin/threshold_local.hpp"

namespace docbin {

struct HybridParams {
  double t1 = 0.03;   // contrast category cut-points
  double t2 = 0.04;
  double t3 = 0.085;
  double d_min = 5;   // fuzzy-branch threshold-gap bounds (intensity units)
  double d_max = 25;
  double p_factor = 0.5;  // fuzzy-branch mid-band population factor
  double k_smear = 8.0;   // smear detection sensitivity
  int segment = 35;       // smear segment side (pixels)
  LocalParams nick = {.window = 35, .k = -0.1};  // second-pass binarizer
  double t_ctr = 0.02;    // enhancement gate
  ClaheParams clahe;
  double lambda = 15.0;   // component filter factor for the full pipeline
  int tsmo_groups = 32;

  bool operator==(const HybridParams&) const = default;
};

enum class ContrastCategory { low, fuzzy, medium, high };

inline std::string_view category_name(ContrastCategory c) {
  switch (c) {
    case ContrastCategory::low: return "low";
    case ContrastCategory::fuzzy: return "fuzzy";
    case ContrastCategory::medium: return "medium";
    case ContrastCategory::high: return "high";
  }
  return "?";
}

namespace detail {

inline void validate_hybrid(const HybridParams& p) {
  if (!(p.t1 > 0 && p.t1 < p.t2 && p.t2 < p.t3 && p.t3 < 1))
    throw InvalidParams("hybrid: need 0 < t1 < t2 < t3 < 1");
  if (!(p.d_min >= 0 && p.d_min <= p.d_max && p.d_max <= 255))
    throw InvalidParams("hybrid: need 0 <= d_min <= d_max <= 255");
  if (!(p.p_factor >= 0 && p.p_factor <= 1)) throw InvalidParams("hybrid: p_factor must be in [0,1]");
  if (p.k_smear < 0) throw InvalidParams("hybrid: k_smear must be >= 0");
  if (p.segment < 8) throw InvalidParams("hybrid: segment side must be >= 8");
  if (!(p.t_ctr > 0 && p.t_ctr < 1)) throw InvalidParams("hybrid: t_ctr must be in (0,1)");
  if (p.lambda <= 0) throw InvalidParams("hybrid: lambda must be positive");
  validate_local(p.nick);
}

}  // namespace detail

// The four half-open contrast intervals partition [0,1].
inline ContrastCategory classify_contrast(double ctr, const HybridParams& p) {
  if (!(ctr >= 0 && ctr <= 1)) throw InvalidParams("classify_contrast: ctr must be in [0,1]");
  if (ctr <= p.t1) return ContrastCategory::low;
  if (ctr <= p.t2) return ContrastCategory::fuzzy;
  if (ctr <= p.t3) return ContrastCategory::medium;
  return ContrastCategory::high;
}

struct ThresholdSelection {
  int threshold = 0;
  int otsu_t = -1;    // filled when the branch consulted Otsu
  int tsmo_t1 = -1;   // filled when the branch consulted TSMO
  int tsmo_t2 = -1;
  bool degenerate = false;
};

// Category-driven global threshold choice:
//   low    -> TSMO upper threshold
//   fuzzy  -> TSMO upper threshold when the Otsu/TSMO gap lies in
//             [d_min, d_max] and the mid band stays small, else Otsu
//   medium -> Otsu
//   high   -> TSMO lower threshold
inline ThresholdSelection select_global_threshold_detail(const Histogram& hist, ContrastCategory cat,
                                                         const HybridParams& p) {
  ThresholdSelection sel;
  if (populated_bins(hist) < 2) {
    const OtsuResult o = otsu(hist);
    sel.threshold = o.threshold;
    sel.otsu_t = o.threshold;
    sel.degenerate = true;
    return sel;
  }
  switch (cat) {
    case ContrastCategory::low: {
      const TsmoResult t = tsmo(hist, p.tsmo_groups);
      sel.tsmo_t1 = t.t_o1;
      sel.tsmo_t2 = t.t_o2;
      sel.threshold = t.t_o2;
      break;
    }
    case ContrastCategory::medium: {
      const OtsuResult o = otsu(hist);
      sel.otsu_t = o.threshold;
      sel.threshold = o.threshold;
      break;
    }
    case ContrastCategory::high: {
      const TsmoResult t = tsmo(hist, p.tsmo_groups);
      sel.tsmo_t1 = t.t_o1;
      sel.tsmo_t2 = t.t_o2;
      sel.threshold = t.t_o1;
      break;
    }
    case ContrastCategory::fuzzy: {
      const OtsuResult o = otsu(hist);
      const TsmoResult t = tsmo(hist, p.tsmo_groups);
      sel.otsu_t = o.threshold;
      sel.tsmo_t1 = t.t_o1;
      sel.tsmo_t2 = t.t_o2;
      const detail::HistPrefix pre(hist);
      const double gap = std::abs(t.t_o2 - o.threshold);
      const uint64_t low_count = pre.count_le(o.threshold);
      const uint64_t band_count =
          t.t_o2 > o.threshold ? pre.count_le(t.t_o2) - pre.count_le(o.threshold) : 0;
      const bool take_tsmo = gap >= p.d_min && gap <= p.d_max &&
                             static_cast<double>(band_count) <= p.p_factor * static_cast<double>(low_count);
      sel.threshold = take_tsmo ? t.t_o2 : o.threshold;
      break;
    }
  }
  return sel;
}

inline int select_global_threshold(const Histogram& hist, ContrastCategory cat, const HybridParams& p) {
  return select_global_threshold_detail(hist, cat, p).threshold;
}

// Per-segment ink-density flags. A segment is suspicious when its
// foreground frequency exceeds mean + k_smear * stddev of all segments.
struct SmearMap {
  int segment = 0;
  int cols = 0;
  int rows = 0;
  std::vector<uint8_t> suspicious;

  bool tile_suspicious(int i, int j) const { return suspicious[static_cast<size_t>(j) * cols + i] != 0; }

  Rect tile_rect(int i, int j, int image_width, int image_height) const {
    const int x0 = i * segment;
    const int y0 = j * segment;
    const int x1 = x0 + segment < image_width ? x0 + segment : image_width;
    const int y1 = y0 + segment < image_height ? y0 + segment : image_height;
    return Rect{x0, y0, x1 - x0, y1 - y0};
  }

  int suspicious_count() const {
    int n = 0;
    for (uint8_t v : suspicious) n += v;
    return n;
  }
};

inline SmearMap detect_smear(const BinaryImage& bin, const HybridParams& p) {
  if (p.segment < 8) throw InvalidParams("detect_smear: segment side must be >= 8");
  SmearMap map;
  map.segment = p.segment;
  map.cols = (bin.width() + p.segment - 1) / p.segment;
  map.rows = (bin.height() + p.segment - 1) / p.segment;
  const size_t n = static_cast<size_t>(map.cols) * map.rows;

  std::vector<double> freq(n);
  for (int j = 0; j < map.rows; ++j) {
    for (int i = 0; i < map.cols; ++i) {
      const Rect r = map.tile_rect(i, j, bin.width(), bin.height());
      uint64_t fg = 0;
      for (int y = r.y; y < r.y + r.height; ++y) {
        const uint8_t* row = bin.row(y);
        for (int x = r.x; x < r.x + r.width; ++x) fg += row[x];
      }
      freq[static_cast<size_t>(j) * map.cols + i] =
          static_cast<double>(fg) / (static_cast<double>(r.width) * r.height);
    }
  }

  double mean = 0;
  for (double f : freq) mean += f;
  mean /= static_cast<double>(n);
  double var = 0;
  for (double f : freq) var += (f - mean) * (f - mean);
  var /= static_cast<double>(n);
  const double cut = mean + p.k_smear * std::sqrt(var);

  map.suspicious.assign(n, 0);
  for (size_t i = 0; i < n; ++i) map.suspicious[i] = freq[i] > cut ? 1 : 0;
  return map;
}

struct PipelineTrace {
  double input_contrast = 0;    // measured on the grayscale input
  bool enhanced = false;
  double working_contrast = 0;  // after optional enhancement; drives the category
  ContrastCategory category = ContrastCategory::medium;
  bool degenerate = false;      // blank-page fallback (no threshold applied)
  int otsu_threshold = -1;
  int tsmo_low = -1;
  int tsmo_high = -1;
  int threshold = -1;           // global threshold actually applied
  int suspicious_tiles = 0;
  int total_tiles = 0;
};

// Full hybrid binarization stage: contrast-gated enhancement, category
// driven global threshold, then Nick re-binarization of suspicious
// segments (windows keep full-image context). Clean segments are exactly
// the global-threshold mask.
inline std::pair<BinaryImage, PipelineTrace> hybrid_binarize(const GrayImage& img, const HybridParams& p,
                                                             WindowEngine engine = WindowEngine::integral) {
  detail::validate_hybrid(p);
  PipelineTrace trace;

  auto [work, report] = gate_and_enhance(img, p.t_ctr, p.clahe);
  trace.input_contrast = report.local_avg_contrast;
  trace.enhanced = report.enhanced;
  trace.working_contrast =
      report.enhanced ? local_average_contrast(work, p.clahe.epsilon) : report.local_avg_contrast;

  trace.category = classify_contrast(trace.working_contrast, p);

  const Histogram hist = histogram(work);
  if (populated_bins(hist) < 2) {
    // Nothing separable on a blank page.
    trace.degenerate = true;
    return {BinaryImage(img.width(), img.height(), false), trace};
  }

  const ThresholdSelection sel = select_global_threshold_detail(hist, trace.category, p);
  trace.otsu_threshold = sel.otsu_t;
  trace.tsmo_low = sel.tsmo_t1;
  trace.tsmo_high = sel.tsmo_t2;
  trace.threshold = sel.threshold;

  BinaryImage bin = apply_threshold(work, sel.threshold);

  const SmearMap smear = detect_smear(bin, p);
  trace.total_tiles = smear.cols * smear.rows;
  trace.suspicious_tiles = smear.suspicious_count();

  if (trace.suspicious_tiles > 0) {
    std::optional<IntegralImages> ii;
    if (engine == WindowEngine::integral) ii.emplace(work);
    for (int j = 0; j < smear.rows; ++j) {
      for (int i = 0; i < smear.cols; ++i) {
        if (!smear.tile_suspicious(i, j)) continue;
        const Rect r = smear.tile_rect(i, j, work.width(), work.height());
        const BinaryImage patch = ii ? nick_region(work, r, p.nick, *ii)
                                     : nick_region(work, r, p.nick, WindowEngine::naive);
        for (int y = 0; y < r.height; ++y) {
          const uint8_t* src = patch.row(y);
          uint8_t* dst = bin.row(r.y + y);
          for (int x = 0; x < r.width; ++x) dst[r.x + x] = src[x];
        }
      }
    }
  }
  return {std::move(bin), trace};
}

}  // namespace docbin

#endif  // DOCBIN_HYBRID_HPP
