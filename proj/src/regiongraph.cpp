#include "textarea/regiongraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace textarea {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // The smaller root wins, which keeps roots at the row-major-first member.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool has_block(const Region& r, int col, int row) {
  return std::binary_search(r.blocks.begin(), r.blocks.end(), BlockCoord{col, row, r.k()});
}

std::vector<BlockCoord> boundary_blocks(const Region& r) {
  std::vector<BlockCoord> out;
  for (const auto& b : r.blocks) {
    if (!has_block(r, b.col - 1, b.row) || !has_block(r, b.col + 1, b.row) ||
        !has_block(r, b.col, b.row - 1) || !has_block(r, b.col, b.row + 1))
      out.push_back(b);
  }
  return out;
}

double color_dist(const Rgb& a, const ColorVec& c) { return color_distance(to_color(a), c); }

}  // namespace

const char* to_string(GapClass c) {
  switch (c) {
    case GapClass::Unimodal: return "unimodal";
    case GapClass::BimodalMergeable: return "bimodal-mergeable";
    case GapClass::BimodalSplit: return "bimodal-split";
  }
  return "?";
}

std::vector<Region> group_connected(std::span<const BlockCoord> uniform, const Image& img, const Config& cfg) {
  if (uniform.empty()) return {};
  const int k = uniform.front().k;
  const GridShape grid = GridShape::tile(img, k);

  std::vector<BlockCoord> blocks(uniform.begin(), uniform.end());
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());

  constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> slot(grid.size(), kAbsent);
  std::vector<ColorVec> means(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (b.k != k) throw InputError("uniform blocks must share one block size");
    if (!grid.contains(b.col, b.row)) throw InputError("uniform block lies outside the grid");
    slot[grid.index(b)] = i;
    means[i] = block_mean_color(img, b);
  }

  DisjointSets sets(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    for (auto [dc, dr] : {std::pair{1, 0}, std::pair{0, 1}}) {
      if (!grid.contains(b.col + dc, b.row + dr)) continue;
      const std::size_t j = slot[grid.index(grid.at(b.col + dc, b.row + dr))];
      if (j == kAbsent) continue;
      if (color_distance(means[i], means[j]) < cfg.color_merge_threshold) sets.unite(i, j);
    }
  }

  // Roots are the smallest member index, so iterating in order yields
  // regions sorted by their first block.
  std::vector<Region> regions;
  std::vector<std::size_t> region_of(blocks.size());
  std::vector<ColorVec> sums;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (root == i) {
      region_of[i] = regions.size();
      regions.push_back({static_cast<int>(grid.index(blocks[i])), {}, {}});
      sums.push_back({});
    } else {
      region_of[i] = region_of[root];
    }
    Region& r = regions[region_of[i]];
    r.blocks.push_back(blocks[i]);
    ColorVec& s = sums[region_of[i]];
    s.r += means[i].r;
    s.g += means[i].g;
    s.b += means[i].b;
  }
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const double n = double(regions[i].blocks.size());
    regions[i].mean_color = {sums[i].r / n, sums[i].g / n, sums[i].b / n};
  }
  return regions;
}

GapSample sample_gap(const Region& a, const Region& b, const Image& img) {
  if (a.blocks.empty() || b.blocks.empty()) throw InputError("gap sampling needs nonempty regions");
  if (a.id == b.id) throw InputError("gap sampling needs two distinct regions");
  if (a.k() != b.k()) throw InputError("gap sampling needs regions of one scale");
  const int k = a.k();

  // Any closest pair lies on both region boundaries.
  const auto edge_a = boundary_blocks(a);
  const auto edge_b = boundary_blocks(b);
  long best = std::numeric_limits<long>::max();
  BlockCoord from{}, to{};
  for (const auto& p : edge_a) {
    for (const auto& q : edge_b) {
      const long d = long(p.col - q.col) * (p.col - q.col) + long(p.row - q.row) * (p.row - q.row);
      if (d < best) {
        best = d;
        from = p;
        to = q;
      }
    }
  }

  GapSample sample;
  sample.source = {a.id, b.id};
  const double x1 = from.x0() + k / 2.0, y1 = from.y0() + k / 2.0;
  const double x2 = to.x0() + k / 2.0, y2 = to.y0() + k / 2.0;
  const double length = std::hypot(x2 - x1, y2 - y1);
  const long steps = std::max(1L, static_cast<long>(std::ceil(length)));
  int last_x = -1, last_y = -1;
  for (long t = 0; t <= steps; ++t) {
    const double f = double(t) / double(steps);
    const int x = static_cast<int>(std::floor(x1 + (x2 - x1) * f));
    const int y = static_cast<int>(std::floor(y1 + (y2 - y1) * f));
    if (x == last_x && y == last_y) continue;
    last_x = x;
    last_y = y;
    if (!img.contains(x, y)) continue;
    const int col = x / k, row = y / k;
    if (has_block(a, col, row) || has_block(b, col, row)) continue;
    sample.pixels.push_back(img.at(x, y));
  }
  return sample;
}

TwoMeans two_means(std::span<const Rgb> sample) {
  TwoMeans out;
  if (sample.empty()) return out;
  std::vector<Rgb> points(sample.begin(), sample.end());
  std::sort(points.begin(), points.end());

  std::vector<Rgb> distinct = points;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::size_t seed_a = 0, seed_b = 0;
  double far = -1.0;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      const double d = color_distance(to_color(distinct[i]), to_color(distinct[j]));
      if (d > far) {
        far = d;
        seed_a = i;
        seed_b = j;
      }
    }
  }
  ColorVec centre[2] = {to_color(distinct[seed_a]), to_color(distinct[seed_b])};

  std::vector<int> label(points.size(), 0);
  for (int iter = 0; iter < 50; ++iter) {
    ColorVec sum[2] = {};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const int l = color_dist(points[i], centre[0]) <= color_dist(points[i], centre[1]) ? 0 : 1;
      label[i] = l;
      sum[l].r += points[i].r;
      sum[l].g += points[i].g;
      sum[l].b += points[i].b;
      ++count[l];
    }
    double moved = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (count[c] == 0) continue;
      const double n = double(count[c]);
      const ColorVec next{sum[c].r / n, sum[c].g / n, sum[c].b / n};
      moved = std::max(moved, color_distance(next, centre[c]));
      centre[c] = next;
    }
    if (moved < 1e-6) break;
  }

  double spread = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    spread += color_dist(points[i], centre[label[i]]);
  out.first = centre[0];
  out.second = centre[1];
  out.separation = color_distance(centre[0], centre[1]);
  out.spread = spread / double(points.size());
  return out;
}

GapClass classify_gap(const GapSample& sample, const Config& cfg) {
  if (sample.pixels.empty()) return GapClass::Unimodal;
  const TwoMeans m = two_means(sample.pixels);
  if (m.separation < std::max(2.0 * m.spread, 20.0)) return GapClass::Unimodal;
  return m.separation >= cfg.peak_separation_threshold ? GapClass::BimodalMergeable : GapClass::BimodalSplit;
}

ColorVec merged_mean(const Region& a, const Region& b) {
  const double wa = double(a.pixel_area());
  const double wb = double(b.pixel_area());
  const double w = wa + wb;
  return {(a.mean_color.r * wa + b.mean_color.r * wb) / w, (a.mean_color.g * wa + b.mean_color.g * wb) / w,
          (a.mean_color.b * wa + b.mean_color.b * wb) / w};
}

std::vector<Region> merge_regions(std::vector<Region> regions, const Image& img, const Config& cfg) {
  std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < regions.size(); ++i)
    if (regions[i].id == regions[i - 1].id) throw InputError("duplicate region id");
  for (const auto& r : regions) {
    if (r.blocks.empty()) throw InputError("regions must be nonempty");
    if (r.k() != regions.front().k()) throw InputError("regions must share one scale");
  }

  // Gap verdicts per id pair; entries are dropped whenever either side changes.
  std::map<std::pair<int, int>, bool> verdicts;
  auto mergeable = [&](const Region& a, const Region& b) {
    const auto key = std::pair{a.id, b.id};
    if (auto it = verdicts.find(key); it != verdicts.end()) return it->second;
    const GapClass c = classify_gap(sample_gap(a, b, img), cfg);
    const bool ok = c == GapClass::Unimodal || c == GapClass::BimodalMergeable;
    verdicts.emplace(key, ok);
    return ok;
  };

  while (regions.size() > 1) {
    std::vector<std::tuple<double, int, int, std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i < regions.size(); ++i) {
      for (std::size_t j = i + 1; j < regions.size(); ++j) {
        const double d = color_distance(regions[i].mean_color, regions[j].mean_color);
        if (d < cfg.color_merge_threshold) candidates.emplace_back(d, regions[i].id, regions[j].id, i, j);
      }
    }
    std::sort(candidates.begin(), candidates.end());

    bool merged = false;
    for (const auto& [d, id_a, id_b, i, j] : candidates) {
      if (!mergeable(regions[i], regions[j])) continue;
      Region& keep = regions[i];
      Region& gone = regions[j];
      keep.mean_color = merged_mean(keep, gone);
      std::vector<BlockCoord> blocks;
      blocks.reserve(keep.blocks.size() + gone.blocks.size());
      std::merge(keep.blocks.begin(), keep.blocks.end(), gone.blocks.begin(), gone.blocks.end(),
                 std::back_inserter(blocks));
      keep.blocks = std::move(blocks);
      std::erase_if(verdicts, [&](const auto& e) {
        const auto [x, y] = e.first;
        return x == id_a || y == id_a || x == id_b || y == id_b;
      });
      regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(j));
      merged = true;
      break;
    }
    if (!merged) break;
  }
  return regions;
}

}  // namespace textarea
