#ifndef DOCBIN_POSTPROCESS_HPP
#define DOCBIN_POSTPROCESS_HPP

#include <cmath>
#include <cstdint>

#include "docbin/raster.hpp"

namespace docbin {

struct PostprocessParams {
  double lambda = 15.0;  // connected-component filter factor

  bool operator==(const PostprocessParams&) const = default;
};

namespace detail {

inline int fg_neighbors8(const BinaryImage& img, int x, int y) {
  int n = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int xx = x + dx;
      const int yy = y + dy;
      if (img.contains(xx, yy) && img.fg(xx, yy)) ++n;
    }
  }
  return n;
}

inline int fg_neighbors4(const BinaryImage& img, int x, int y) {
  int n = 0;
  if (img.contains(x - 1, y) && img.fg(x - 1, y)) ++n;
  if (img.contains(x + 1, y) && img.fg(x + 1, y)) ++n;
  if (img.contains(x, y - 1) && img.fg(x, y - 1)) ++n;
  if (img.contains(x, y + 1) && img.fg(x, y + 1)) ++n;
  return n;
}

}  // namespace detail

// Foreground pixels with no 8-connected foreground neighbour become background.
inline BinaryImage remove_isolated(const BinaryImage& bin) {
  BinaryImage out = bin;
  for (int y = 0; y < bin.height(); ++y)
    for (int x = 0; x < bin.width(); ++x)
      if (bin.fg(x, y) && detail::fg_neighbors8(bin, x, y) == 0) out.set_fg(x, y, false);
  return out;
}

// Background pixels whose four orthogonal neighbours are all foreground are
// filled. One simultaneous pass: decisions read the input, writes go to the
// output, so adjacent gaps fill together.
inline BinaryImage fill_gaps(const BinaryImage& bin) {
  BinaryImage out = bin;
  for (int y = 0; y < bin.height(); ++y)
    for (int x = 0; x < bin.width(); ++x)
      if (!bin.fg(x, y) && detail::fg_neighbors4(bin, x, y) == 4) out.set_fg(x, y, true);
  return out;
}

// Removes connected components larger than (lambda * mean) / stddev of the
// component sizes. With fewer than two components, or equal sizes
// (stddev 0), the rule is undefined and the image passes through.
inline BinaryImage filter_components(const BinaryImage& bin, const PostprocessParams& p) {
  if (p.lambda <= 0) throw InvalidParams("filter_components: lambda must be positive");
  const ComponentSet cs = connected_components(bin);
  if (cs.count < 2) return bin;

  double mean = 0;
  for (int c = 1; c <= cs.count; ++c) mean += static_cast<double>(cs.sizes[c]);
  mean /= cs.count;
  double var = 0;
  for (int c = 1; c <= cs.count; ++c) {
    const double d = static_cast<double>(cs.sizes[c]) - mean;
    var += d * d;
  }
  var /= cs.count;
  const double stddev = std::sqrt(var);
  if (stddev == 0) return bin;

  const double cutoff = p.lambda * mean / stddev;
  BinaryImage out = bin;
  for (int y = 0; y < bin.height(); ++y) {
    for (int x = 0; x < bin.width(); ++x) {
      const int32_t label = cs.label(x, y, bin.width());
      if (label && static_cast<double>(cs.sizes[label]) > cutoff) out.set_fg(x, y, false);
    }
  }
  return out;
}

// Single-pass stroke-edge cleanup on one input snapshot:
//   convexity: foreground with exactly one orthogonal foreground neighbour
//              and at most two foreground 8-neighbours -> background;
//   concavity: background with exactly three orthogonal foreground
//              neighbours -> foreground.
inline BinaryImage fix_pixel_artifacts(const BinaryImage& bin) {
  BinaryImage out = bin;
  for (int y = 0; y < bin.height(); ++y) {
    for (int x = 0; x < bin.width(); ++x) {
      if (bin.fg(x, y)) {
        if (detail::fg_neighbors4(bin, x, y) == 1 && detail::fg_neighbors8(bin, x, y) <= 2)
          out.set_fg(x, y, false);
      } else {
        if (detail::fg_neighbors4(bin, x, y) == 3) out.set_fg(x, y, true);
      }
    }
  }
  return out;
}

// Full cleanup sequence: isolated-pixel removal, gap filling, oversized
// component filtering, then the convexity/concavity pass.
inline BinaryImage postprocess(const BinaryImage& bin, const PostprocessParams& p) {
  return fix_pixel_artifacts(filter_components(fill_gaps(remove_isolated(bin)), p));
}

}  // namespace docbin

#endif  // DOCBIN_POSTPROCESS_HPP
