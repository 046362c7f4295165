#include "textarea/shape.hpp"

#include <algorithm>
#include <climits>

namespace textarea {

namespace {

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// 4-connected components of cells equal to `value`; one entry per component,
// true when it reaches the bounding-box border.
std::vector<bool> flood_components(const RegionMask& m, bool value) {
  const int w = m.cols(), h = m.rows();
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
  std::vector<bool> touches;
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (m.at(c, r) != value || seen[static_cast<std::size_t>(r) * w + c]) continue;
      bool border = false;
      stack.push_back({c, r});
      seen[static_cast<std::size_t>(r) * w + c] = 1;
      while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border = true;
        for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
          if (s || m.at(nx, ny) != value) continue;
          s = 1;
          stack.push_back({nx, ny});
        }
      }
      touches.push_back(border);
    }
  }
  return touches;
}

}  // namespace

RegionMask::RegionMask(int k, int col0, int row0, int cols, int rows, std::vector<std::uint8_t> cells)
    : k_(k), col0_(col0), row0_(row0), cols_(cols), rows_(rows), cells_(std::move(cells)) {
  if (k < 1 || cols < 1 || rows < 1) throw InputError("region mask needs a positive size");
  if (cells_.size() != static_cast<std::size_t>(cols) * rows) throw InputError("region mask size mismatch");
  bool top = false, bottom = false, left = false, right = false;
  for (int c = 0; c < cols; ++c) {
    top = top || at(c, 0);
    bottom = bottom || at(c, rows - 1);
  }
  for (int r = 0; r < rows; ++r) {
    left = left || at(0, r);
    right = right || at(cols - 1, r);
  }
  if (!(top && bottom && left && right)) throw InputError("region mask must be nonempty with a tight box");
}

RegionMask RegionMask::from_blocks(std::span<const BlockCoord> blocks) {
  if (blocks.empty()) throw InputError("region mask needs at least one block");
  int c0 = INT_MAX, r0 = INT_MAX, c1 = INT_MIN, r1 = INT_MIN;
  for (const auto& b : blocks) {
    if (b.k != blocks.front().k) throw InputError("region mask blocks must share one size");
    c0 = std::min(c0, b.col);
    r0 = std::min(r0, b.row);
    c1 = std::max(c1, b.col);
    r1 = std::max(r1, b.row);
  }
  const int cols = c1 - c0 + 1, rows = r1 - r0 + 1;
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(cols) * rows, 0);
  for (const auto& b : blocks) cells[static_cast<std::size_t>(b.row - r0) * cols + (b.col - c0)] = 1;
  return RegionMask(blocks.front().k, c0, r0, cols, rows, std::move(cells));
}

RegionMask RegionMask::from_region(const Region& region) { return from_blocks(region.blocks); }

std::size_t RegionMask::count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

double Hull::area() const {
  const std::size_t n = vertices.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

bool Hull::contains(Point p) const {
  const std::size_t n = vertices.size();
  if (n == 0) return false;
  if (n == 1) return p == vertices[0];
  if (n == 2) {
    const Point& a = vertices[0];
    const Point& b = vertices[1];
    return cross(a, b, p) == 0.0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (cross(vertices[i], vertices[(i + 1) % n], p) < 0.0) return false;
  return true;
}

bool is_connected(const RegionMask& mask) { return flood_components(mask, true).size() == 1; }

VoidComponents void_components(const RegionMask& mask) {
  VoidComponents out;
  for (bool border : flood_components(mask, false)) (border ? out.touching_border : out.enclosed)++;
  return out;
}

int count_holes(const RegionMask& mask) { return void_components(mask).enclosed; }

Hull convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() < 3) return {points};

  std::vector<Point> hull(2 * points.size());
  std::size_t n = 0;
  for (const auto& p : points) {
    while (n >= 2 && cross(hull[n - 2], hull[n - 1], p) <= 0.0) --n;
    hull[n++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = n + 1; i-- > 0;) {
    const auto& p = points[i];
    while (n >= lower && cross(hull[n - 2], hull[n - 1], p) <= 0.0) --n;
    hull[n++] = p;
  }
  hull.resize(n - 1);  // last point repeats the first
  return {hull};
}

Hull region_hull(const RegionMask& mask) {
  std::vector<Point> corners;
  const double k = mask.k();
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (!mask.at(c, r)) continue;
      const double x = (mask.col0() + c) * k, y = (mask.row0() + r) * k;
      corners.insert(corners.end(), {{x, y}, {x + k, y}, {x, y + k}, {x + k, y + k}});
    }
  }
  return convex_hull(std::move(corners));
}

double solidity(const RegionMask& mask) {
  const double area = double(mask.count()) * mask.k() * mask.k();
  return area / region_hull(mask).area();
}

ShapeVerdict shape_test(const RegionMask& mask, const Config& cfg) {
  if (!is_connected(mask)) return ShapeVerdict::Keep;
  if (count_holes(mask) > 0) return ShapeVerdict::Keep;
  return solidity(mask) >= cfg.solidity_threshold ? ShapeVerdict::Eliminate : ShapeVerdict::Keep;
}

}  // namespace textarea
