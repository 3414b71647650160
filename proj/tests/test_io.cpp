#include <png.h>

#include <catch2/catch_amalgamated.hpp>
#include <cstring>
#include <fstream>

#include "docbin/io.hpp"
#include "testutil.hpp"

using docbin::BinaryImage;
using docbin::GrayImage;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream f(p, std::ios::binary);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void write_rgb_png(const std::filesystem::path& p, int w, int h, const std::vector<uint8_t>& rgb) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGB;
  REQUIRE(png_image_write_to_file(&image, p.string().c_str(), 0, rgb.data(), 3 * w, nullptr) != 0);
}

}  // namespace

TEST_CASE("luma weights") {
  CHECK(docbin::luma(255, 255, 255) == 255);
  CHECK(docbin::luma(0, 0, 0) == 0);
  CHECK(docbin::luma(255, 0, 0) == 76);  // round(0.299*255)
  CHECK(docbin::luma(0, 255, 0) == 150);
  CHECK(docbin::luma(0, 0, 255) == 29);
  for (int v = 0; v < 256; ++v) CHECK(docbin::luma(v, v, v) == v);  // gray passes through
}

TEST_CASE("pgm: 1x1 binary file with value 0") {
  testutil::TempDir dir("pgm1");
  const auto p = dir.path() / "one.pgm";
  write_bytes(p, std::string("P5\n1 1\n255\n") + '\0');
  const GrayImage img = docbin::load_gray(p);
  CHECK(img.width() == 1);
  CHECK(img.height() == 1);
  CHECK(img.at(0, 0) == 0);
}

TEST_CASE("pgm: ascii P2 with comments") {
  testutil::TempDir dir("pgm2");
  const auto p = dir.path() / "a.pgm";
  write_bytes(p, "P2\n# a comment\n2 2\n255\n0 64\n# another\n128 255\n");
  const GrayImage img = docbin::load_gray(p);
  CHECK(img.at(0, 0) == 0);
  CHECK(img.at(1, 0) == 64);
  CHECK(img.at(0, 1) == 128);
  CHECK(img.at(1, 1) == 255);
}

TEST_CASE("png: rgb converts through luma") {
  testutil::TempDir dir("png1");
  const auto p = dir.path() / "rgb.png";
  write_rgb_png(p, 2, 1, {255, 255, 255, 255, 0, 0});
  const GrayImage img = docbin::load_gray(p);
  CHECK(img.at(0, 0) == 255);
  CHECK(img.at(1, 0) == 76);
}

TEST_CASE("png: 8-bit gray round trip") {
  testutil::TempDir dir("png2");
  const auto p = dir.path() / "gray.png";
  const GrayImage img = testutil::random_gray(23, 17, 4242);
  docbin::save_gray(img, p);
  CHECK(docbin::load_gray(p) == img);
}

TEST_CASE("save_binary writes foreground as 0 and background as 255") {
  testutil::TempDir dir("bin");
  BinaryImage all_bg(2, 2, false);
  BinaryImage all_fg(2, 2, true);
  const auto pbg = dir.path() / "bg.pgm";
  const auto pfg = dir.path() / "fg.png";
  docbin::save_binary(all_bg, pbg);
  docbin::save_binary(all_fg, pfg);
  const GrayImage gbg = docbin::load_gray(pbg);
  const GrayImage gfg = docbin::load_gray(pfg);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) {
      CHECK(gbg.at(x, y) == 255);
      CHECK(gfg.at(x, y) == 0);
    }
}

TEST_CASE("binary round trip recovers the mask under threshold-at-128") {
  testutil::TempDir dir("rt");
  BinaryImage checker(2, 2);
  checker.set_fg(0, 0, true);
  checker.set_fg(1, 1, true);
  for (const char* name : {"c.png", "c.pgm"}) {
    const auto p = dir.path() / name;
    docbin::save_binary(checker, p);
    CHECK(docbin::load_binary(p) == checker);
  }
  const BinaryImage random = testutil::random_binary(31, 14, 0.4, 99);
  const auto p = dir.path() / "r.png";
  docbin::save_binary(random, p);
  CHECK(docbin::load_binary(p) == random);
}

TEST_CASE("io error paths") {
  testutil::TempDir dir("errs");
  CHECK_THROWS_AS(docbin::load_gray(dir.path() / "missing.png"), docbin::FileNotFound);

  const auto ppm = dir.path() / "color.ppm";
  write_bytes(ppm, "P6\n1 1\n255\nabc");
  CHECK_THROWS_AS(docbin::load_gray(ppm), docbin::UnsupportedFormat);

  const auto junk = dir.path() / "junk.png";
  write_bytes(junk, "this is not an image");
  CHECK_THROWS_AS(docbin::load_gray(junk), docbin::UnsupportedFormat);

  const auto truncated = dir.path() / "short.pgm";
  write_bytes(truncated, "P5\n4 4\n255\nab");
  CHECK_THROWS_AS(docbin::load_gray(truncated), docbin::CorruptImage);

  const auto deep = dir.path() / "deep.pgm";
  write_bytes(deep, "P5\n2 2\n65535\nxxxxxxxx");
  CHECK_THROWS_AS(docbin::load_gray(deep), docbin::UnsupportedFormat);

  BinaryImage b(2, 2);
  CHECK_THROWS_AS(docbin::save_binary(b, dir.path() / "out.tiff"), docbin::UnsupportedFormat);
}
