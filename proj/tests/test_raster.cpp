#include <catch2/catch_amalgamated.hpp>

#include "docbin/raster.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using docbin::BinaryImage;
using docbin::GrayImage;
using docbin::Histogram;
using docbin::IntegralImages;

TEST_CASE("histogram counts every intensity") {
  GrayImage all7(2, 2, 7);
  const Histogram h = docbin::histogram(all7);
  CHECK(h.bins[7] == 4);
  CHECK(h.total == 4);
  for (int v = 0; v < 256; ++v)
    if (v != 7) CHECK(h.bins[v] == 0);

  GrayImage pair(2, 1, std::vector<uint8_t>{0, 255});
  const Histogram hp = docbin::histogram(pair);
  CHECK(hp.bins[0] == 1);
  CHECK(hp.bins[255] == 1);
}

TEST_CASE("histogram total equals pixel count and matches a counting oracle") {
  const GrayImage img = testutil::random_gray(64, 64, 101);
  const Histogram h = docbin::histogram(img);
  CHECK(h.total == 4096);
  uint64_t counts[256] = {0};
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) ++counts[img.at(x, y)];
  uint64_t total = 0;
  for (int v = 0; v < 256; ++v) {
    CHECK(h.bins[v] == counts[v]);
    total += h.bins[v];
  }
  CHECK(total == h.total);
}

TEST_CASE("integral image prefix sums") {
  GrayImage one(1, 1, 5);
  const IntegralImages ii(one);
  CHECK(ii.sum_at(1, 1) == 5);
  CHECK(ii.sq_at(1, 1) == 25);
  CHECK(ii.sum_at(0, 0) == 0);
  CHECK(ii.sum_at(1, 0) == 0);
  CHECK(ii.sum_at(0, 1) == 0);

  GrayImage ones(2, 2, 1);
  const IntegralImages ii2(ones);
  CHECK(ii2.sum(0, 0, 2, 2) == 4);
}

TEST_CASE("integral window sums match naive loops exactly") {
  const GrayImage img = testutil::random_gray(32, 32, 7);
  const IntegralImages ii(img);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int x0 = static_cast<int>(rng() % 32);
    const int y0 = static_cast<int>(rng() % 32);
    const int x1 = x0 + 1 + static_cast<int>(rng() % (32 - x0));
    const int y1 = y0 + 1 + static_cast<int>(rng() % (32 - y0));
    uint64_t sum = 0, sq = 0;
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) {
        sum += img.at(x, y);
        sq += static_cast<uint64_t>(img.at(x, y)) * img.at(x, y);
      }
    CHECK(ii.sum(x0, y0, x1, y1) == sum);
    CHECK(ii.sq_sum(x0, y0, x1, y1) == sq);
  }
}

TEST_CASE("integral sums are monotone along rows and columns") {
  const GrayImage img = testutil::random_gray(16, 12, 55);
  const IntegralImages ii(img);
  for (int y = 0; y <= 12; ++y)
    for (int x = 1; x <= 16; ++x) CHECK(ii.sum_at(x, y) >= ii.sum_at(x - 1, y));
  for (int x = 0; x <= 16; ++x)
    for (int y = 1; y <= 12; ++y) CHECK(ii.sum_at(x, y) >= ii.sum_at(x, y - 1));
}

TEST_CASE("local_mean_std basics") {
  GrayImage flat(5, 5, 100);
  const IntegralImages ii(flat);
  for (int window : {1, 3, 5}) {
    const auto ms = docbin::local_mean_std(ii, 2, 2, window);
    CHECK(ms.mean == 100.0);
    CHECK(ms.stddev == 0.0);
  }

  // window {100,100,200,200}: mean 150, population stddev 50
  GrayImage quad(2, 2, std::vector<uint8_t>{100, 100, 200, 200});
  const IntegralImages iq(quad);
  const auto ms = docbin::local_mean_std(iq, 0, 0, 3);
  CHECK(ms.mean == Catch::Approx(150.0));
  CHECK(ms.stddev == Catch::Approx(50.0));
}

TEST_CASE("local_mean_std clamps the window at borders") {
  GrayImage img(3, 3, 0);
  img.at(0, 0) = 10;
  img.at(1, 0) = 20;
  img.at(0, 1) = 30;
  img.at(1, 1) = 40;
  const IntegralImages ii(img);
  // corner pixel: 3x3 window keeps only the four existing pixels
  const auto ms = docbin::local_mean_std(ii, 0, 0, 3);
  CHECK(ms.mean == Catch::Approx(25.0));
}

TEST_CASE("local_mean_std equals naive computation within 1e-6") {
  const GrayImage img = testutil::random_gray(48, 36, 1234);
  const IntegralImages ii(img);
  for (int window : {3, 5, 9, 15}) {
    for (int y = 0; y < img.height(); y += 3) {
      for (int x = 0; x < img.width(); x += 3) {
        const auto fast = docbin::local_mean_std(ii, x, y, window);
        const auto slow = oracle::window_stats(img, x, y, window);
        CHECK(fast.mean == Catch::Approx(slow.mean).margin(1e-6));
        CHECK(fast.stddev == Catch::Approx(slow.stddev).margin(1e-6));
      }
    }
  }
}

TEST_CASE("local_mean_std rejects bad windows") {
  GrayImage img(4, 4, 1);
  const IntegralImages ii(img);
  CHECK_THROWS_AS(docbin::local_mean_std(ii, 0, 0, 2), docbin::InvalidParams);
  CHECK_THROWS_AS(docbin::local_mean_std(ii, 0, 0, 0), docbin::InvalidParams);
  CHECK_THROWS_AS(docbin::local_mean_std(ii, 9, 0, 3), docbin::InvalidParams);
}

TEST_CASE("connected_components basics") {
  BinaryImage empty(8, 8);
  CHECK(docbin::connected_components(empty).count == 0);

  BinaryImage diag(4, 4);
  diag.set_fg(1, 1, true);
  diag.set_fg(2, 2, true);
  const auto cs = docbin::connected_components(diag);
  CHECK(cs.count == 1);
  CHECK(cs.sizes[1] == 2);
}

TEST_CASE("connected_components agrees with a flood-fill oracle") {
  const BinaryImage img = testutil::random_binary(60, 40, 0.25, 17);
  const auto cs = docbin::connected_components(img);
  const auto fc = oracle::flood_fill_components(img);
  REQUIRE(cs.count == fc.count);
  uint64_t total = 0;
  for (int c = 1; c <= cs.count; ++c) {
    CHECK(cs.sizes[c] >= 1);
    total += cs.sizes[c];
  }
  CHECK(total == img.fg_count());
  // Both routes hand out ids in raster order of first pixels, so the
  // label planes agree exactly.
  for (int c = 1; c <= cs.count; ++c) CHECK(cs.sizes[c] == fc.sizes[c]);
  for (size_t i = 0; i < cs.labels.size(); ++i) REQUIRE(cs.labels[i] == fc.labels[i]);
}

TEST_CASE("connected_components merges label chains") {
  // U-shape: two arms meeting at the bottom exercise union-find collapsing.
  BinaryImage u(5, 4);
  for (int y = 0; y < 4; ++y) {
    u.set_fg(0, y, true);
    u.set_fg(4, y, true);
  }
  for (int x = 0; x < 5; ++x) u.set_fg(x, 3, true);
  const auto cs = docbin::connected_components(u);
  CHECK(cs.count == 1);
  CHECK(cs.sizes[1] == u.fg_count());
}

TEST_CASE("labeling is invariant under image copy") {
  const BinaryImage img = testutil::random_binary(30, 30, 0.3, 5);
  const BinaryImage copy = img;
  const auto a = docbin::connected_components(img);
  const auto b = docbin::connected_components(copy);
  CHECK(a.labels == b.labels);
  CHECK(a.sizes == b.sizes);
}
