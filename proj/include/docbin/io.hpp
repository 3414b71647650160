#ifndef DOCBIN_IO_HPP
#define DOCBIN_IO_HPP

#include <png.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "docbin/image.hpp"

namespace docbin {

// BT.601 luma, rounded half-up. Equal channels pass through unchanged
// because the weights sum to exactly 1.
inline uint8_t luma(uint8_t r, uint8_t g, uint8_t b) {
  return static_cast<uint8_t>(std::floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5));
}

namespace detail {

inline std::string lower_ext(const std::filesystem::path& path) {
  std::string e = path.extension().string();
  for (char& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return e;
}

// PGM header tokens are whitespace separated; '#' starts a comment to EOL.
inline bool next_pnm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) break;
  }
  if (c == EOF) return false;
  do {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  } while (c != EOF && !std::isspace(c) && c != '#');
  if (c == '#') in.unget();
  return true;
}

inline uint64_t pnm_uint(std::istream& in, const std::string& path, const char* what) {
  std::string tok;
  if (!next_pnm_token(in, tok)) throw CorruptImage("pgm: truncated header (" + std::string(what) + "): " + path);
  uint64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw CorruptImage("pgm: bad " + std::string(what) + " '" + tok + "': " + path);
    v = v * 10 + (c - '0');
    if (v > (1u << 30)) throw CorruptImage("pgm: implausible " + std::string(what) + ": " + path);
  }
  return v;
}

inline GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  char magic[2] = {0, 0};
  in.read(magic, 2);
  const bool ascii = magic[0] == 'P' && magic[1] == '2';
  const bool raw = magic[0] == 'P' && magic[1] == '5';
  if (!ascii && !raw) throw UnsupportedFormat("not a P2/P5 PGM file: " + path.string());

  const std::string p = path.string();
  const int w = static_cast<int>(pnm_uint(in, p, "width"));
  const int h = static_cast<int>(pnm_uint(in, p, "height"));
  const uint64_t maxval = pnm_uint(in, p, "maxval");
  if (w < 1 || h < 1) throw CorruptImage("pgm: empty image: " + p);
  if (maxval == 0 || maxval > 255) throw UnsupportedFormat("pgm: only 8-bit maxval supported: " + p);

  std::vector<uint8_t> data(static_cast<size_t>(w) * h);
  if (raw) {
    // Exactly one whitespace byte separates the header from the raster.
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (static_cast<size_t>(in.gcount()) != data.size()) throw CorruptImage("pgm: truncated raster: " + p);
  } else {
    for (size_t i = 0; i < data.size(); ++i) {
      const uint64_t v = pnm_uint(in, p, "sample");
      if (v > maxval) throw CorruptImage("pgm: sample above maxval: " + p);
      data[i] = static_cast<uint8_t>(v);
    }
  }
  if (maxval != 255) {
    for (uint8_t& v : data)
      v = static_cast<uint8_t>(std::lround(v * 255.0 / static_cast<double>(maxval)));
  }
  return GrayImage(w, h, std::move(data));
}

inline GrayImage load_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.string().c_str()))
    throw CorruptImage("png: " + std::string(image.message) + ": " + path.string());
  image.format = PNG_FORMAT_RGB;  // any color model arrives as RGB; we do our own luma
  std::vector<uint8_t> rgb(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw CorruptImage("png: " + msg + ": " + path.string());
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  if (w < 1 || h < 1) throw CorruptImage("png: empty image: " + path.string());
  std::vector<uint8_t> data(static_cast<size_t>(w) * h);
  for (size_t i = 0; i < data.size(); ++i)
    data[i] = luma(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
  return GrayImage(w, h, std::move(data));
}

inline void save_pgm_gray(const std::vector<uint8_t>& data, int w, int h,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write: " + path.string());
  out << "P5\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

inline void save_png_gray(const std::vector<uint8_t>& data, int w, int h,
                          const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, data.data(), w, nullptr))
    throw IoError("png write: " + std::string(image.message) + ": " + path.string());
}

inline void save_gray_data(const std::vector<uint8_t>& data, int w, int h,
                           const std::filesystem::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".png")
    save_png_gray(data, w, h, path);
  else if (ext == ".pgm")
    save_pgm_gray(data, w, h, path);
  else
    throw UnsupportedFormat("unsupported output extension '" + ext + "': " + path.string());
}

}  // namespace detail

// Reads a PNG (8-bit gray or color) or PGM (P2/P5) file as grayscale.
// Color input is reduced with BT.601 luma weights.
inline GrayImage load_gray(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec) || ec) throw FileNotFound("no such file: " + path.string());
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open: " + path.string());
  unsigned char magic[8] = {0};
  probe.read(reinterpret_cast<char*>(magic), 8);
  probe.close();
  if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G')
    return detail::load_png(path);
  if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) return detail::load_pgm(path);
  if (magic[0] == 'P' && magic[1] >= '1' && magic[1] <= '6')
    throw UnsupportedFormat("only P2/P5 PGM variants are supported: " + path.string());
  throw UnsupportedFormat("unrecognized image format: " + path.string());
}

inline void save_gray(const GrayImage& img, const std::filesystem::path& path) {
  detail::save_gray_data(img.data(), img.width(), img.height(), path);
}

// Writes foreground as 0 (black) and background as 255 (white); format by
// extension (.png or .pgm).
inline void save_binary(const BinaryImage& img, const std::filesystem::path& path) {
  std::vector<uint8_t> data(img.pixel_count());
  for (int y = 0; y < img.height(); ++y) {
    const uint8_t* src = img.row(y);
    uint8_t* dst = data.data() + static_cast<size_t>(y) * img.width();
    for (int x = 0; x < img.width(); ++x) dst[x] = src[x] ? 0 : 255;
  }
  detail::save_gray_data(data, img.width(), img.height(), path);
}

// Loads a bilevel file saved with the convention above (ink < 128).
inline BinaryImage load_binary(const std::filesystem::path& path) {
  return binary_from_gray(load_gray(path), 128);
}

}  // namespace docbin

#endif  // DOCBIN_IO_HPP
