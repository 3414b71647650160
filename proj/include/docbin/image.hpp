#ifndef DOCBIN_IMAGE_HPP
#define DOCBIN_IMAGE_HPP

#include <cassert>
#include <cstdint>
#include <utility>
#include <vector>

#include "docbin/errors.hpp"

namespace docbin {

// Half-open pixel rectangle covering [x, x+width) x [y, y+height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool operator==(const Rect&) const = default;
};

// 8-bit grayscale raster, row-major.
class GrayImage {
 public:
  GrayImage() = default;

  GrayImage(int width, int height, uint8_t fill = 0) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidParams("GrayImage: dimensions must be >= 1");
    data_.assign(static_cast<size_t>(width) * height, fill);
  }

  GrayImage(int width, int height, std::vector<uint8_t> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (width < 1 || height < 1) throw InvalidParams("GrayImage: dimensions must be >= 1");
    if (data_.size() != static_cast<size_t>(width) * height)
      throw InvalidParams("GrayImage: data length must equal width*height");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return data_.size(); }

  uint8_t at(int x, int y) const {
    assert(contains(x, y));
    return data_[static_cast<size_t>(y) * width_ + x];
  }
  uint8_t& at(int x, int y) {
    assert(contains(x, y));
    return data_[static_cast<size_t>(y) * width_ + x];
  }

  const uint8_t* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }
  uint8_t* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }

  bool contains(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
  bool contains(const Rect& r) const {
    return r.width >= 1 && r.height >= 1 && r.x >= 0 && r.y >= 0 && r.x + r.width <= width_ &&
           r.y + r.height <= height_;
  }

  const std::vector<uint8_t>& data() const { return data_; }
  std::vector<uint8_t>& data() { return data_; }

  bool operator==(const GrayImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> data_;
};

// Bilevel raster; foreground marks ink. The serialized convention is
// foreground = 0 (black), background = 255 (white).
class BinaryImage {
 public:
  BinaryImage() = default;

  BinaryImage(int width, int height, bool fg_fill = false) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidParams("BinaryImage: dimensions must be >= 1");
    fg_.assign(static_cast<size_t>(width) * height, fg_fill ? 1 : 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  size_t pixel_count() const { return fg_.size(); }

  bool fg(int x, int y) const {
    assert(contains(x, y));
    return fg_[static_cast<size_t>(y) * width_ + x] != 0;
  }
  void set_fg(int x, int y, bool fg) {
    assert(contains(x, y));
    fg_[static_cast<size_t>(y) * width_ + x] = fg ? 1 : 0;
  }

  const uint8_t* row(int y) const { return fg_.data() + static_cast<size_t>(y) * width_; }
  uint8_t* row(int y) { return fg_.data() + static_cast<size_t>(y) * width_; }

  bool contains(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

  uint64_t fg_count() const {
    uint64_t n = 0;
    for (uint8_t v : fg_) n += v;
    return n;
  }

  const std::vector<uint8_t>& flags() const { return fg_; }

  bool operator==(const BinaryImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<uint8_t> fg_;  // 1 = foreground
};

// Recovers a bilevel image from gray data: foreground iff value < cut.
inline BinaryImage binary_from_gray(const GrayImage& g, int cut = 128) {
  BinaryImage out(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y) {
    const uint8_t* src = g.row(y);
    uint8_t* dst = out.row(y);
    for (int x = 0; x < g.width(); ++x) dst[x] = src[x] < cut ? 1 : 0;
  }
  return out;
}

}  // namespace docbin

#endif  // DOCBIN_IMAGE_HPP
