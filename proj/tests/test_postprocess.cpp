#include <catch2/catch_amalgamated.hpp>

#include "docbin/postprocess.hpp"
#include "testutil.hpp"

using docbin::BinaryImage;
using docbin::PostprocessParams;

namespace {

BinaryImage from_rows(const std::vector<std::string>& rows) {
  BinaryImage img(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) img.set_fg(x, y, rows[y][x] == '#');
  return img;
}

}  // namespace

TEST_CASE("remove_isolated basics") {
  BinaryImage lone(5, 5);
  lone.set_fg(2, 2, true);
  CHECK(docbin::remove_isolated(lone).fg_count() == 0);

  const BinaryImage domino = from_rows({"##"});
  CHECK(docbin::remove_isolated(domino) == domino);
}

TEST_CASE("remove_isolated leaves no isolated pixel and is idempotent") {
  const BinaryImage img = testutil::random_binary(50, 50, 0.08, 12);
  const BinaryImage once = docbin::remove_isolated(img);
  for (int y = 0; y < once.height(); ++y)
    for (int x = 0; x < once.width(); ++x)
      if (once.fg(x, y)) REQUIRE(docbin::detail::fg_neighbors8(once, x, y) > 0);
  CHECK(docbin::remove_isolated(once) == once);
}

TEST_CASE("fill_gaps fills a hollow plus center") {
  const BinaryImage plus = from_rows({
      ".#.",
      "#.#",
      ".#.",
  });
  const BinaryImage filled = docbin::fill_gaps(plus);
  CHECK(filled.fg(1, 1));
  CHECK(filled.fg_count() == plus.fg_count() + 1);

  const BinaryImage block = from_rows({"###", "###", "###"});
  CHECK(docbin::fill_gaps(block) == block);
}

TEST_CASE("fill_gaps fills diagonal neighbours in one simultaneous pass") {
  // both holes see four foreground orthogonals in the input
  const BinaryImage bar = from_rows({
      "#####",
      "#.###",
      "##.##",
      "#####",
  });
  const BinaryImage filled = docbin::fill_gaps(bar);
  CHECK(filled.fg(1, 1));
  CHECK(filled.fg(2, 2));
  CHECK(filled.fg_count() == bar.fg_count() + 2);
}

TEST_CASE("fill_gaps never invents a pixel without four input neighbours") {
  const BinaryImage img = testutil::random_binary(40, 40, 0.45, 3);
  const BinaryImage out = docbin::fill_gaps(img);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (out.fg(x, y) && !img.fg(x, y)) REQUIRE(docbin::detail::fg_neighbors4(img, x, y) == 4);
}

TEST_CASE("filter_components guards equal sizes and tiny component counts") {
  // three 10-pixel bars: stddev 0, nothing happens
  const BinaryImage bars = from_rows({
      "##########",
      "..........",
      "##########",
      "..........",
      "##########",
  });
  CHECK(docbin::filter_components(bars, PostprocessParams{}) == bars);

  const BinaryImage empty(6, 6);
  CHECK(docbin::filter_components(empty, PostprocessParams{}) == empty);

  const BinaryImage solo = from_rows({"#####"});
  CHECK(docbin::filter_components(solo, PostprocessParams{}) == solo);
}

TEST_CASE("filter_components drops the oversized component") {
  // sizes {10, 10, 400}: mean 140, stddev ~183.8, cutoff ~11.4
  BinaryImage img(60, 30);
  for (int x = 0; x < 10; ++x) img.set_fg(x, 0, true);
  for (int x = 0; x < 10; ++x) img.set_fg(x, 4, true);
  for (int y = 8; y < 28; ++y)
    for (int x = 20; x < 40; ++x) img.set_fg(x, y, true);
  const BinaryImage out = docbin::filter_components(img, PostprocessParams{.lambda = 15});
  CHECK(out.fg(0, 0));
  CHECK(out.fg(0, 4));
  CHECK_FALSE(out.fg(25, 15));
  CHECK(out.fg_count() == 20);
}

TEST_CASE("fix_pixel_artifacts removes corner bumps and line endpoints") {
  // bump at the end of a bar edge: one orthogonal plus one diagonal neighbour
  const BinaryImage bump = from_rows({
      "#....",
      "##...",
      "##...",
  });
  const BinaryImage cleaned = docbin::fix_pixel_artifacts(bump);
  CHECK_FALSE(cleaned.fg(0, 0));

  // endpoints of a one-pixel line go in a single pass, without cascading
  const BinaryImage line = from_rows({".....", "#####", "....."});
  const BinaryImage once = docbin::fix_pixel_artifacts(line);
  CHECK_FALSE(once.fg(0, 1));
  CHECK_FALSE(once.fg(4, 1));
  CHECK(once.fg(1, 1));
  CHECK(once.fg(2, 1));
  CHECK(once.fg(3, 1));
}

TEST_CASE("fix_pixel_artifacts fills a single-pixel notch") {
  const BinaryImage notch = from_rows({
      "##.##",
      "#####",
      "#####",
  });
  const BinaryImage out = docbin::fix_pixel_artifacts(notch);
  CHECK(out.fg(2, 0));
}

TEST_CASE("postprocess fixpoints") {
  const BinaryImage empty(16, 16, false);
  CHECK(docbin::postprocess(empty, PostprocessParams{}) == empty);
  const BinaryImage full(16, 16, true);
  CHECK(docbin::postprocess(full, PostprocessParams{}) == full);
}

TEST_CASE("postprocess removes salt noise and keeps text strokes") {
  // same-size 10x2 strokes: the component filter has nothing to cut
  BinaryImage text(120, 90);
  for (int row = 8; row + 2 < 90; row += 10)
    for (int x0 = 6; x0 + 12 < 120; x0 += 18)
      for (int dy = 0; dy < 2; ++dy)
        for (int dx = 0; dx < 10; ++dx) text.set_fg(x0 + dx, row + dy, true);

  BinaryImage noisy = text;
  std::mt19937_64 rng(7);
  int placed = 0;
  while (placed < 30) {
    const int x = 1 + static_cast<int>(rng() % 118);
    const int y = 1 + static_cast<int>(rng() % 88);
    bool clear = true;
    for (int dy = -1; dy <= 1 && clear; ++dy)
      for (int dx = -1; dx <= 1 && clear; ++dx)
        if (noisy.fg(x + dx, y + dy)) clear = false;
    if (!clear) continue;
    noisy.set_fg(x, y, true);
    ++placed;
  }
  REQUIRE(noisy.fg_count() == text.fg_count() + 30);
  const BinaryImage cleaned = docbin::postprocess(noisy, PostprocessParams{});
  CHECK(cleaned == text);  // salt gone, strokes untouched
}

TEST_CASE("postprocess accounting: growth only from filled gaps and notches") {
  const BinaryImage input = testutil::random_binary(60, 60, 0.35, 21);
  const BinaryImage s1 = docbin::remove_isolated(input);
  const BinaryImage s2 = docbin::fill_gaps(s1);
  const BinaryImage s3 = docbin::filter_components(s2, PostprocessParams{});
  const BinaryImage s4 = docbin::fix_pixel_artifacts(s3);
  CHECK(docbin::postprocess(input, PostprocessParams{}) == s4);

  const uint64_t gap_fills = s2.fg_count() - s1.fg_count();
  uint64_t concavity_fills = 0;
  for (int y = 0; y < s3.height(); ++y)
    for (int x = 0; x < s3.width(); ++x)
      if (s4.fg(x, y) && !s3.fg(x, y)) ++concavity_fills;
  CHECK(s4.fg_count() <= input.fg_count() + gap_fills + concavity_fills);
}

TEST_CASE("filter_components validates lambda") {
  CHECK_THROWS_AS(docbin::filter_components(BinaryImage(4, 4), PostprocessParams{.lambda = 0}),
                  docbin::InvalidParams);
}
