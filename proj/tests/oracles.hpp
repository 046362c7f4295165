#pragma once

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/regiongraph.hpp"

namespace testing {

using textarea::BlockCoord;
using textarea::Config;
using textarea::Image;
using textarea::Point;
using textarea::Region;

struct Channels {
  std::vector<double> r, g, b;
};

inline Channels random_block(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.0, 255.0);
  Channels c;
  for (int i = 0; i < k * k; ++i) {
    c.r.push_back(d(rng));
    c.g.push_back(d(rng));
    c.b.push_back(d(rng));
  }
  return c;
}

inline double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool strictly_inside(Point p, Point a, Point b, Point c) {
  const double d1 = cross(a, b, p), d2 = cross(b, c, p), d3 = cross(c, a, p);
  return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

/// Points not strictly inside any triangle of the other points.
inline std::set<Point> brute_hull(const std::vector<Point>& pts) {
  std::set<Point> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool inside = false;
    for (std::size_t a = 0; a < pts.size() && !inside; ++a)
      for (std::size_t b = a + 1; b < pts.size() && !inside; ++b)
        for (std::size_t c = b + 1; c < pts.size() && !inside; ++c)
          if (a != i && b != i && c != i) inside = strictly_inside(pts[i], pts[a], pts[b], pts[c]);
    if (!inside) keep.insert(pts[i]);
  }
  return keep;
}

using Partition = std::set<std::set<std::pair<int, int>>>;

inline Partition partition(const std::vector<Region>& regions) {
  Partition out;
  for (const auto& r : regions) {
    std::set<std::pair<int, int>> s;
    for (const auto& b : r.blocks) s.insert({b.col, b.row});
    out.insert(s);
  }
  return out;
}

/// Grouping by an explicit parent array over every pair of present cells.
inline Partition grouping_oracle(std::span<const BlockCoord> uniform, const Image& img, int cols, const Config& cfg) {
  std::map<int, int> parent;
  for (const auto& b : uniform) parent[b.row * cols + b.col] = b.row * cols + b.col;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v];
    return v;
  };
  const int k = uniform.empty() ? 1 : uniform.front().k;
  for (const auto& [a, pa] : parent) {
    for (const auto& [b, pb] : parent) {
      const int ac = a % cols, ar = a / cols, bc = b % cols, br = b / cols;
      if (std::abs(ac - bc) + std::abs(ar - br) != 1) continue;
      const auto ma = textarea::block_mean_color(img, {ac, ar, k});
      const auto mb = textarea::block_mean_color(img, {bc, br, k});
      if (textarea::color_distance(ma, mb) < cfg.color_merge_threshold) parent[find(a)] = find(b);
    }
  }
  std::map<int, std::set<std::pair<int, int>>> groups;
  for (const auto& [v, p] : parent) groups[find(v)].insert({v % cols, v / cols});
  Partition expected;
  for (auto& [root, s] : groups) expected.insert(s);
  return expected;
}

}  // namespace testing
