#include "textarea/polygon.hpp"

#include <algorithm>
#include <cmath>

namespace textarea {

namespace {

// Sorted x positions where the horizontal line at `y` crosses the polygon.
void row_crossings(const Polygon& poly, double y, std::vector<double>& out) {
  out.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > y) != (b.y > y)) out.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
  }
  std::sort(out.begin(), out.end());
}

}  // namespace

double polygon_area(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % n];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

bool polygon_contains(const Polygon& poly, Point p) {
  if (poly.size() < 3) return false;
  std::vector<double> xs;
  row_crossings(poly, p.y, xs);
  const auto before = std::lower_bound(xs.begin(), xs.end(), p.x) - xs.begin();
  return before % 2 == 1;
}

double polygon_iou(const Polygon& a, const Polygon& b) {
  if (a.size() < 3 && b.size() < 3) return 0.0;
  double minx = INFINITY, miny = INFINITY, maxx = -INFINITY, maxy = -INFINITY;
  for (const Polygon* poly : {&a, &b}) {
    for (const auto& p : *poly) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  }
  const double extent = std::max(maxx - minx, maxy - miny);
  if (!(extent > 0.0)) return 0.0;
  const double step = std::min(1.0, extent / 512.0);
  const auto cols = static_cast<std::size_t>(std::ceil((maxx - minx) / step));
  const auto rows = static_cast<std::size_t>(std::ceil((maxy - miny) / step));

  // Number of cell centres x0 + (i + 0.5) * step, i in [0, cols), below x.
  auto centres_below = [&](double x) {
    const double v = std::ceil((x - minx) / step - 0.5);
    return static_cast<std::size_t>(std::clamp(v, 0.0, double(cols)));
  };

  std::vector<double> xa;
  std::vector<std::uint8_t> cover(cols);
  std::size_t inter = 0, uni = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = miny + (double(r) + 0.5) * step;
    std::fill(cover.begin(), cover.end(), 0);
    int bit = 1;
    for (const Polygon* poly : {&a, &b}) {
      if (poly->size() >= 3) {
        row_crossings(*poly, y, xa);
        for (std::size_t i = 0; i + 1 < xa.size(); i += 2) {
          for (std::size_t c = centres_below(xa[i]); c < centres_below(xa[i + 1]); ++c)
            cover[c] |= static_cast<std::uint8_t>(bit);
        }
      }
      bit <<= 1;
    }
    for (auto v : cover) {
      inter += v == 3;
      uni += v != 0;
    }
  }
  return uni ? double(inter) / double(uni) : 0.0;
}

}  // namespace textarea
