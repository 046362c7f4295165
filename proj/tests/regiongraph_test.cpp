#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "support.hpp"
#include "textarea/regiongraph.hpp"

using namespace textarea;
using testing::fill_rect;
using testing::partition;

namespace {

constexpr int K = 8;

void paint_block(Image& img, int col, int row, Rgb c) { fill_rect(img, col * K, row * K, (col + 1) * K, (row + 1) * K, c); }

Region region_from(const Image& img, std::vector<BlockCoord> blocks) {
  std::sort(blocks.begin(), blocks.end());
  const auto grid = GridShape::tile(img, blocks.front().k);
  Region r;
  r.id = int(grid.index(blocks.front()));
  ColorVec sum;
  for (const auto& b : blocks) {
    const auto m = block_mean_color(img, b);
    sum.r += m.r;
    sum.g += m.g;
    sum.b += m.b;
  }
  const double n = double(blocks.size());
  r.mean_color = {sum.r / n, sum.g / n, sum.b / n};
  r.blocks = std::move(blocks);
  return r;
}

}  // namespace

TEST_CASE("adjacent blocks join only when their colors are close") {
  Config cfg;
  Image img(2 * K, K, Rgb{200, 200, 200});
  paint_block(img, 1, 0, {210, 205, 200});
  const std::vector<BlockCoord> both{{0, 0, K}, {1, 0, K}};
  CHECK(group_connected(both, img, cfg).size() == 1);

  paint_block(img, 1, 0, {200, 200, 246});
  CHECK(group_connected(both, img, cfg).size() == 2);
}

TEST_CASE("diagonal neighbours stay apart") {
  Image img(2 * K, 2 * K, Rgb{90, 90, 90});
  const std::vector<BlockCoord> diag{{0, 0, K}, {1, 1, K}};
  const auto regions = group_connected(diag, img, Config{});
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].id == 0);
  CHECK(regions[1].id == 3);
}

TEST_CASE("chains of similar blocks form one region") {
  Image img(3 * K, K);
  paint_block(img, 0, 0, {100, 100, 100});
  paint_block(img, 1, 0, {130, 130, 100});
  paint_block(img, 2, 0, {160, 160, 100});
  const std::vector<BlockCoord> row{{0, 0, K}, {1, 0, K}, {2, 0, K}};
  const auto regions = group_connected(row, img, Config{});
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].mean_color.r == doctest::Approx(130.0));
  CHECK(regions[0].pixel_area() == 3 * K * K);
}

TEST_CASE("grouping matches a brute-force union-find") {
  std::mt19937_64 rng(21);
  const std::vector<Rgb> palette{{200, 200, 200}, {210, 205, 200}, {200, 200, 246}, {30, 30, 30}, {235, 215, 200}};
  Config cfg;
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<int> dim(1, 8);
    const int cols = dim(rng), rows = dim(rng);
    Image img(cols * K + 3, rows * K + 5);
    std::vector<BlockCoord> uniform;
    std::uniform_int_distribution<int> pick(0, int(palette.size()) - 1);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        paint_block(img, c, r, palette[pick(rng)]);
        if (rng() % 3 != 0) uniform.push_back({c, r, K});
      }
    }
    std::shuffle(uniform.begin(), uniform.end(), rng);

    const auto expected = testing::grouping_oracle(uniform, img, cols, cfg);

    const auto regions = group_connected(uniform, img, cfg);
    CHECK(partition(regions) == expected);
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const auto& r = regions[i];
      CHECK(std::is_sorted(r.blocks.begin(), r.blocks.end()));
      CHECK(r.id == r.blocks.front().row * cols + r.blocks.front().col);
      if (i > 0) CHECK(regions[i - 1].id < r.id);
      const Region fresh = region_from(img, r.blocks);
      CHECK(color_distance(r.mean_color, fresh.mean_color) < 1e-9);
    }
  }
}

TEST_CASE("grouping rejects mixed block sizes") {
  Image img(32, 32);
  const std::vector<BlockCoord> mixed{{0, 0, 8}, {0, 0, 16}};
  CHECK_THROWS_AS(group_connected(mixed, img, Config{}), InputError);
  CHECK(group_connected({}, img, Config{}).empty());
}

TEST_CASE("gap sample across a black stripe") {
  // Blocks at columns 0 and 2, with a black stripe 10 px wide inside column 1.
  Image img(3 * K * 2, K * 2, Rgb{255, 255, 255});
  const int k = 2 * K;
  fill_rect(img, k + 3, 0, k + 13, k, {0, 0, 0});
  Image solid = img;
  fill_rect(solid, k, 0, 2 * k, k, {0, 0, 0});
  const auto a = region_from(solid, {{0, 0, k}});
  const auto b = region_from(solid, {{2, 0, k}});
  const auto s = sample_gap(a, b, solid);
  REQUIRE(s.pixels.size() == std::size_t(k));
  CHECK(std::all_of(s.pixels.begin(), s.pixels.end(), [](Rgb p) { return p == Rgb{0, 0, 0}; }));
  CHECK(s.source == std::pair{0, 2});

  const auto mixed = sample_gap(region_from(img, {{0, 0, k}}), region_from(img, {{2, 0, k}}), img);
  const auto dark = std::count(mixed.pixels.begin(), mixed.pixels.end(), Rgb{0, 0, 0});
  CHECK(dark == 10);
  CHECK(mixed.pixels.size() - dark == std::size_t(k - 10));
}

TEST_CASE("adjacent regions have an empty gap") {
  Image img(2 * K, K, Rgb{20, 20, 20});
  const auto a = region_from(img, {{0, 0, K}});
  const auto b = region_from(img, {{1, 0, K}});
  CHECK(sample_gap(a, b, img).pixels.empty());
  CHECK(classify_gap(sample_gap(a, b, img), Config{}) == GapClass::Unimodal);
  CHECK_THROWS_AS(sample_gap(a, a, img), InputError);
}

TEST_CASE("gap uses the closest pair of blocks") {
  Image img(6 * K, 3 * K, Rgb{255, 255, 255});
  fill_rect(img, 3 * K, 2 * K, 4 * K, 3 * K, {0, 0, 0});
  // Region a spans columns 0..2 on row 2; region b is column 4 on rows 0..2.
  const auto a = region_from(img, {{0, 2, K}, {1, 2, K}, {2, 2, K}});
  const auto b = region_from(img, {{4, 0, K}, {4, 1, K}, {4, 2, K}});
  const auto s = sample_gap(a, b, img);
  REQUIRE(s.pixels.size() == std::size_t(K));
  CHECK(std::all_of(s.pixels.begin(), s.pixels.end(), [](Rgb p) { return p == Rgb{0, 0, 0}; }));
}

TEST_CASE("two-means on point masses") {
  std::vector<Rgb> half;
  for (int i = 0; i < 20; ++i) half.push_back(i % 2 ? Rgb{0, 0, 0} : Rgb{255, 255, 255});
  const auto m = two_means(half);
  CHECK(m.separation == doctest::Approx(kMaxColorDistance));
  CHECK(m.spread == doctest::Approx(0.0));
  CHECK(two_means({}).separation == 0.0);
}

TEST_CASE("gap classification examples") {
  Config cfg;
  GapSample gray;
  gray.pixels.assign(30, Rgb{128, 128, 128});
  CHECK(classify_gap(gray, cfg) == GapClass::Unimodal);

  GapSample bw;
  for (int i = 0; i < 30; ++i) bw.pixels.push_back(i < 15 ? Rgb{0, 0, 0} : Rgb{255, 255, 255});
  CHECK(classify_gap(bw, cfg) == GapClass::BimodalMergeable);

  GapSample close;
  for (int i = 0; i < 30; ++i) close.pixels.push_back(i < 15 ? Rgb{100, 100, 100} : Rgb{140, 140, 140});
  CHECK(two_means(close.pixels).separation == doctest::Approx(std::sqrt(3.0 * 40 * 40)));
  CHECK(classify_gap(close, cfg) == GapClass::BimodalSplit);

  GapSample faint;
  for (int i = 0; i < 30; ++i) faint.pixels.push_back(i < 15 ? Rgb{100, 100, 100} : Rgb{110, 100, 100});
  CHECK(classify_gap(faint, cfg) == GapClass::Unimodal);

  CHECK(classify_gap(GapSample{}, cfg) == GapClass::Unimodal);
}

TEST_CASE("gap classification ignores sample order") {
  std::mt19937_64 rng(31);
  Config cfg;
  for (int t = 0; t < 200; ++t) {
    GapSample s;
    const Rgb a = testing::random_rgb(rng), b = testing::random_rgb(rng);
    std::normal_distribution<double> noise(0.0, double(rng() % 30));
    const int n = 1 + int(rng() % 60);
    for (int i = 0; i < n; ++i) {
      const Rgb c = (rng() % 2) ? a : b;
      auto j = [&](std::uint8_t v) { return static_cast<std::uint8_t>(std::clamp(v + noise(rng), 0.0, 255.0)); };
      s.pixels.push_back({j(c.r), j(c.g), j(c.b)});
    }
    const auto verdict = classify_gap(s, cfg);
    const auto m = two_means(s.pixels);
    for (int p = 0; p < 3; ++p) {
      std::shuffle(s.pixels.begin(), s.pixels.end(), rng);
      CHECK(classify_gap(s, cfg) == verdict);
      CHECK(two_means(s.pixels).separation == m.separation);
    }
  }
}

TEST_CASE("regions split by text merge, distant colors never do") {
  Config cfg;
  Image img(5 * K, K, Rgb{255, 255, 255});
  fill_rect(img, 2 * K + 2, 0, 3 * K - 2, K, {0, 0, 0});
  std::vector<Region> regions{region_from(img, {{0, 0, K}, {1, 0, K}}), region_from(img, {{3, 0, K}, {4, 0, K}})};
  const auto merged = merge_regions(regions, img, cfg);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].id == 0);
  CHECK(merged[0].blocks.size() == 4);

  Image far(5 * K, K, Rgb{200, 200, 200});
  fill_rect(far, 3 * K, 0, 5 * K, K, {200, 200, 246});
  std::vector<Region> apart{region_from(far, {{0, 0, K}}), region_from(far, {{4, 0, K}})};
  CHECK(merge_regions(apart, far, cfg).size() == 2);

  std::vector<Region> single{region_from(img, {{0, 0, K}})};
  const auto same = merge_regions(single, img, cfg);
  REQUIRE(same.size() == 1);
  CHECK(same[0].blocks == single[0].blocks);
}

TEST_CASE("a mid-contrast gap keeps regions apart") {
  Image img(5 * K, K, Rgb{100, 100, 100});
  fill_rect(img, 2 * K + 2, 0, 2 * K + 10, K, {140, 140, 140});
  std::vector<Region> regions{region_from(img, {{0, 0, K}, {1, 0, K}}), region_from(img, {{3, 0, K}, {4, 0, K}})};
  CHECK(merge_regions(regions, img, Config{}).size() == 2);
}

TEST_CASE("merging is order independent and conserves the mean") {
  std::mt19937_64 rng(41);
  Config cfg;
  for (int t = 0; t < 30; ++t) {
    const int cols = 8, rows = 6;
    Image img(cols * K, rows * K, Rgb{240, 240, 240});
    std::uniform_int_distribution<int> jitter(-12, 12);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        const int v = 240 + jitter(rng);
        paint_block(img, c, r, {std::uint8_t(v), std::uint8_t(v), std::uint8_t(240)});
      }
    // Text-like strokes between patches.
    for (int s = 0; s < 6; ++s) {
      const int x = int(rng() % (cols * K - 4)), y = int(rng() % (rows * K - 4));
      fill_rect(img, x, y, x + 3, std::min(rows * K, y + K), {10, 10, 10});
    }
    std::vector<BlockCoord> uniform;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (rng() % 2) uniform.push_back({c, r, K});
    if (uniform.empty()) continue;
    const auto groups = group_connected(uniform, img, cfg);
    const auto merged = merge_regions(groups, img, cfg);

    auto shuffled = groups;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = merge_regions(shuffled, img, cfg);
    REQUIRE(again.size() == merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
      CHECK(again[i].id == merged[i].id);
      CHECK(again[i].blocks == merged[i].blocks);
    }

    std::size_t total = 0;
    for (const auto& r : merged) {
      total += r.blocks.size();
      const Region fresh = region_from(img, r.blocks);
      CHECK(color_distance(r.mean_color, fresh.mean_color) < 1e-9);
    }
    CHECK(total == uniform.size());
  }
}

TEST_CASE("merged mean weights by area") {
  Region a{0, {{0, 0, 4}}, {0, 0, 0}};
  Region b{1, {{1, 0, 4}, {2, 0, 4}, {3, 0, 4}}, {100, 40, 8}};
  const auto m = merged_mean(a, b);
  CHECK(m.r == doctest::Approx(75.0));
  CHECK(m.g == doctest::Approx(30.0));
  CHECK(m.b == doctest::Approx(6.0));
}
