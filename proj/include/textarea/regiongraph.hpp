#pragma once

#include <span>
#include <utility>
#include <vector>

#include "textarea/core.hpp"

namespace textarea {

/// A candidate background: a set of same-scale grid blocks.
struct Region {
  /// Row-major grid index of the region's first block. Stable under merging
  /// (the merged region keeps the lower id), so ids never depend on list order.
  int id = 0;
  /// Sorted row-major, all with the same k.
  std::vector<BlockCoord> blocks;
  /// Pixel-area-weighted mean over all member pixels.
  ColorVec mean_color;

  int k() const { return blocks.empty() ? 0 : blocks.front().k; }
  std::size_t pixel_area() const { return blocks.size() * static_cast<std::size_t>(k()) * k(); }
};

struct GapSample {
  std::vector<Rgb> pixels;
  std::pair<int, int> source{0, 0};
};

enum class GapClass { Unimodal, BimodalMergeable, BimodalSplit };

const char* to_string(GapClass c);

/// Connected components of the uniform blocks under 4-adjacency, where two
/// neighbours are joined only when their block mean colors are closer than
/// cfg.color_merge_threshold. Regions come back ordered by id.
std::vector<Region> group_connected(std::span<const BlockCoord> uniform, const Image& img, const Config& cfg);

/// Pixels along the straight segment between the centres of the closest
/// pair of blocks (one per region, ties broken row-major), sampled at unit
/// steps. Pixels inside either region are skipped, as are immediate repeats
/// of the same pixel.
GapSample sample_gap(const Region& a, const Region& b, const Image& img);

/// Result of deterministic 2-means over a color sample.
struct TwoMeans {
  ColorVec first;
  ColorVec second;
  /// Distance between the two centres.
  double separation = 0.0;
  /// Mean distance from each point to its own centre.
  double spread = 0.0;
};

/// Seeds the centres at the two most distant sample colors, then runs Lloyd
/// iterations (at most 50, stopping once no centre moves more than 1e-6).
/// The sample is sorted first so the result does not depend on its order.
TwoMeans two_means(std::span<const Rgb> sample);

/// Unimodal when the sample is empty or the 2-means separation is below
/// max(2 * spread, 20); otherwise bimodal, and mergeable when the peaks are at
/// least cfg.peak_separation_threshold apart.
GapClass classify_gap(const GapSample& sample, const Config& cfg);

/// Mean color of the union of two regions, weighted by pixel area.
ColorVec merged_mean(const Region& a, const Region& b);

/// Greedily merges color-similar region pairs whose gap is unimodal or
/// bimodal with well separated peaks, nearest colors first (ties by lower
/// id), until no pair qualifies. Output is ordered by id.
std::vector<Region> merge_regions(std::vector<Region> regions, const Image& img, const Config& cfg);

}  // namespace textarea
