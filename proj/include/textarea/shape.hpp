#pragma once

#include <span>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/regiongraph.hpp"

namespace textarea {

/// Region membership over the region's tight bounding box, in block units.
class RegionMask {
 public:
  /// `cells` is row-major over cols x rows; throws InputError when empty or
  /// when the box is not tight.
  RegionMask(int k, int col0, int row0, int cols, int rows, std::vector<std::uint8_t> cells);

  static RegionMask from_region(const Region& region);
  static RegionMask from_blocks(std::span<const BlockCoord> blocks);

  int k() const { return k_; }
  int col0() const { return col0_; }
  int row0() const { return row0_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }

  /// Local (bounding-box relative) coordinates; false outside the box.
  bool at(int c, int r) const {
    return c >= 0 && r >= 0 && c < cols_ && r < rows_ && cells_[static_cast<std::size_t>(r) * cols_ + c] != 0;
  }
  std::size_t count() const;

 private:
  int k_, col0_, row0_, cols_, rows_;
  std::vector<std::uint8_t> cells_;
};

/// Counter-clockwise (y up) convex polygon without collinear vertices.
struct Hull {
  Polygon vertices;

  double area() const;
  /// Closed containment, boundary included.
  bool contains(Point p) const;
};

bool is_connected(const RegionMask& mask);

/// 4-connected components of non-member cells inside the bounding box.
struct VoidComponents {
  int enclosed = 0;
  int touching_border = 0;
};

VoidComponents void_components(const RegionMask& mask);

/// Enclosed void components only.
int count_holes(const RegionMask& mask);

/// Andrew's monotone chain. Duplicates and collinear points are dropped;
/// collinear input gives the two extremes, a single point gives itself.
Hull convex_hull(std::vector<Point> points);

/// Hull of every member-block corner, in pixel coordinates.
Hull region_hull(const RegionMask& mask);

/// Member pixel area over the pixel area of region_hull.
double solidity(const RegionMask& mask);

enum class ShapeVerdict { Keep, Eliminate };

/// Eliminates connected, hole-free regions whose solidity reaches
/// cfg.solidity_threshold; every other region is kept.
ShapeVerdict shape_test(const RegionMask& mask, const Config& cfg);

}  // namespace textarea
