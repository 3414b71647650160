#ifndef DOCBIN_ENHANCE_HPP
#define DOCBIN_ENHANCE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "docbin/image.hpp"

namespace docbin {

struct ClaheParams {
  int tile_cols = 8;
  int tile_rows = 8;
  double clip_limit = 2.0;  // relative slope limit (x uniform histogram level)
  double epsilon = 1e-9;    // tiny denominator guard for the contrast measure

  bool operator==(const ClaheParams&) const = default;
};

struct ContrastReport {
  double local_avg_contrast = 0;
  bool enhanced = false;
};

// Michelson contrast (i_max - i_min) / (i_max + i_min + epsilon).
// Result sits in [0, 1); epsilon keeps the all-black case defined.
inline double michelson_contrast(int i_max, int i_min, double epsilon) {
  return (i_max - i_min) / (static_cast<double>(i_max) + i_min + epsilon);
}

// Mean Michelson contrast of every clamped 3x3 window.
inline double local_average_contrast(const GrayImage& img, double epsilon) {
  const int w = img.width();
  const int h = img.height();
  double acc = 0;
  for (int y = 0; y < h; ++y) {
    const int y0 = y > 0 ? y - 1 : 0;
    const int y1 = y + 2 < h ? y + 2 : h;
    for (int x = 0; x < w; ++x) {
      const int x0 = x > 0 ? x - 1 : 0;
      const int x1 = x + 2 < w ? x + 2 : w;
      int lo = 255;
      int hi = 0;
      for (int yy = y0; yy < y1; ++yy) {
        const uint8_t* row = img.row(yy);
        for (int xx = x0; xx < x1; ++xx) {
          const int v = row[xx];
          if (v < lo) lo = v;
          if (v > hi) hi = v;
        }
      }
      acc += michelson_contrast(hi, lo, epsilon);
    }
  }
  return acc / static_cast<double>(img.pixel_count());
}

namespace detail {

// Equalization mapping for one tile. Histogram counts above the clip
// ceiling are redistributed uniformly in a single pass; the remainder goes
// round-robin from bin 0 so the result is deterministic.
inline std::array<uint8_t, 256> clahe_tile_lut(const std::array<uint64_t, 256>& hist, uint64_t npix,
                                               double clip_limit) {
  const uint64_t limit =
      std::max<uint64_t>(1, static_cast<uint64_t>(clip_limit * static_cast<double>(npix) / 256.0));
  std::array<uint64_t, 256> clipped;
  uint64_t excess = 0;
  for (int v = 0; v < 256; ++v) {
    if (hist[v] > limit) {
      excess += hist[v] - limit;
      clipped[v] = limit;
    } else {
      clipped[v] = hist[v];
    }
  }
  const uint64_t per_bin = excess / 256;
  const uint64_t remainder = excess % 256;
  for (int v = 0; v < 256; ++v) clipped[v] += per_bin;
  for (uint64_t v = 0; v < remainder; ++v) clipped[v] += 1;

  std::array<uint8_t, 256> lut;
  uint64_t cum = 0;
  for (int v = 0; v < 256; ++v) {
    cum += clipped[v];
    const double mapped = 255.0 * static_cast<double>(cum) / static_cast<double>(npix);
    lut[v] = static_cast<uint8_t>(std::lround(mapped));
  }
  return lut;
}

}  // namespace detail

// Contrast-limited adaptive histogram equalization. Tile mappings are
// blended bilinearly between tile centers; pixels outside the outermost
// centers fall back to the nearest tile (corners end up with a single
// mapping, edges with two).
inline GrayImage clahe(const GrayImage& img, const ClaheParams& p) {
  if (p.tile_cols < 1 || p.tile_rows < 1) throw InvalidParams("clahe: tile grid must be >= 1x1");
  if (p.clip_limit <= 0) throw InvalidParams("clahe: clip_limit must be positive");
  const int w = img.width();
  const int h = img.height();

  int cols = p.tile_cols;
  int rows = p.tile_rows;
  if (w < cols || h < rows) {
    // Too small to host the requested grid: single-tile equalization.
    cols = 1;
    rows = 1;
  }

  // Balanced tile boundaries; trailing tiles absorb the remainder.
  std::vector<int> xs(cols + 1), ys(rows + 1);
  for (int i = 0; i <= cols; ++i) xs[i] = static_cast<int>(static_cast<int64_t>(i) * w / cols);
  for (int j = 0; j <= rows; ++j) ys[j] = static_cast<int>(static_cast<int64_t>(j) * h / rows);

  std::vector<std::array<uint8_t, 256>> luts(static_cast<size_t>(cols) * rows);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols; ++i) {
      std::array<uint64_t, 256> hist{};
      for (int y = ys[j]; y < ys[j + 1]; ++y) {
        const uint8_t* row = img.row(y);
        for (int x = xs[i]; x < xs[i + 1]; ++x) ++hist[row[x]];
      }
      const uint64_t npix = static_cast<uint64_t>(xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j]);
      luts[static_cast<size_t>(j) * cols + i] = detail::clahe_tile_lut(hist, npix, p.clip_limit);
    }
  }

  std::vector<double> cx(cols), cy(rows);
  for (int i = 0; i < cols; ++i) cx[i] = (xs[i] + xs[i + 1] - 1) / 2.0;
  for (int j = 0; j < rows; ++j) cy[j] = (ys[j] + ys[j + 1] - 1) / 2.0;

  // For one axis coordinate, the two bracketing tile indices and the blend factor.
  auto bracket = [](const std::vector<double>& centers, int coord, int& a, int& b, double& t) {
    const int n = static_cast<int>(centers.size());
    if (n == 1 || coord <= centers[0]) {
      a = b = 0;
      t = 0;
      return;
    }
    if (coord >= centers[n - 1]) {
      a = b = n - 1;
      t = 0;
      return;
    }
    int i = 0;
    while (coord >= centers[i + 1]) ++i;
    a = i;
    b = i + 1;
    t = (coord - centers[a]) / (centers[b] - centers[a]);
  };

  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    int j0, j1;
    double ty;
    bracket(cy, y, j0, j1, ty);
    const uint8_t* src = img.row(y);
    uint8_t* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      int i0, i1;
      double tx;
      bracket(cx, x, i0, i1, tx);
      const int v = src[x];
      const double top = (1.0 - tx) * luts[static_cast<size_t>(j0) * cols + i0][v] +
                         tx * luts[static_cast<size_t>(j0) * cols + i1][v];
      const double bot = (1.0 - tx) * luts[static_cast<size_t>(j1) * cols + i0][v] +
                         tx * luts[static_cast<size_t>(j1) * cols + i1][v];
      const double blended = (1.0 - ty) * top + ty * bot;
      dst[x] = static_cast<uint8_t>(std::clamp<long>(std::lround(blended), 0, 255));
    }
  }
  return out;
}

// Applies CLAHE only when the local average contrast falls below t_ctr;
// otherwise the input is returned untouched.
inline std::pair<GrayImage, ContrastReport> gate_and_enhance(const GrayImage& img, double t_ctr,
                                                             const ClaheParams& p) {
  if (!(t_ctr > 0 && t_ctr < 1)) throw InvalidParams("gate_and_enhance: t_ctr must be in (0,1)");
  if (p.epsilon <= 0) throw InvalidParams("gate_and_enhance: epsilon must be positive");
  ContrastReport report;
  report.local_avg_contrast = local_average_contrast(img, p.epsilon);
  if (report.local_avg_contrast < t_ctr) {
    report.enhanced = true;
    return {clahe(img, p), report};
  }
  report.enhanced = false;
  return {img, report};
}

}  // namespace docbin

#endif  // DOCBIN_ENHANCE_HPP
