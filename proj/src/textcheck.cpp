#include "textarea/textcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace textarea {

namespace {

// Per-channel summed-area table over a window of the image.
class ChannelSums {
 public:
  ChannelSums(const Image& img, int x0, int y0, int w, int h) : x0_(x0), y0_(y0), stride_(w + 1) {
    for (auto& t : tables_) t.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0);
    for (int y = 0; y < h; ++y) {
      std::array<std::uint64_t, 3> run{};
      for (int x = 0; x < w; ++x) {
        const Rgb& p = img.at(x0 + x, y0 + y);
        run[0] += p.r;
        run[1] += p.g;
        run[2] += p.b;
        for (int c = 0; c < 3; ++c) tables_[c][idx(x + 1, y + 1)] = tables_[c][idx(x + 1, y)] + run[c];
      }
    }
  }

  // Mean over the image rectangle [x, x + w) x [y, y + h).
  ColorVec mean(int x, int y, int w, int h) const {
    const int lx = x - x0_, ly = y - y0_;
    double out[3];
    for (int c = 0; c < 3; ++c) {
      const auto& t = tables_[c];
      const std::uint64_t s = t[idx(lx + w, ly + h)] + t[idx(lx, ly)] - t[idx(lx, ly + h)] - t[idx(lx + w, ly)];
      out[c] = double(s) / (double(w) * h);
    }
    return {out[0], out[1], out[2]};
  }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * stride_ + x; }

  int x0_, y0_, stride_;
  std::array<std::vector<std::uint64_t>, 3> tables_;
};

// One refinement pass with aligned size x size sub-blocks.
void grow_level(int size, const PixelMask& inside, const ChannelSums& sums, const ColorVec& target,
                double threshold, PixelMask& bg) {
  const int c0 = inside.x0() / size, r0 = inside.y0() / size;
  const int c1 = (inside.x0() + inside.width()) / size;  // exclusive; partial tiles skipped
  const int r1 = (inside.y0() + inside.height()) / size;
  if (c1 <= c0 || r1 <= r0) return;
  const int cols = c1 - c0, rows = r1 - r0;

  auto fully = [&](const PixelMask& m, int bx, int by) {
    for (int y = by; y < by + size; ++y)
      for (int x = bx; x < bx + size; ++x)
        if (!m.at(x, y)) return false;
    return true;
  };
  auto touches_bg = [&](int bx, int by) {
    for (int i = 0; i < size; ++i) {
      if (bg.at(bx - 1, by + i) || bg.at(bx + size, by + i) || bg.at(bx + i, by - 1) || bg.at(bx + i, by + size))
        return true;
    }
    return false;
  };

  // 0 = not claimable, 1 = claimable, 2 = claimed this pass
  std::vector<std::uint8_t> state(static_cast<std::size_t>(cols) * rows, 0);
  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int bx = (c0 + c) * size, by = (r0 + r) * size;
      if (bx < inside.x0() || by < inside.y0()) continue;
      // The hull pixel set is convex, so the four corner pixels decide containment.
      if (!inside.at(bx, by) || !inside.at(bx + size - 1, by) || !inside.at(bx, by + size - 1) ||
          !inside.at(bx + size - 1, by + size - 1))
        continue;
      if (fully(bg, bx, by)) continue;
      if (color_distance(sums.mean(bx, by, size, size), target) >= threshold) continue;
      state[static_cast<std::size_t>(r) * cols + c] = 1;
      if (touches_bg(bx, by)) queue.emplace_back(c, r);
    }
  }

  while (!queue.empty()) {
    auto [c, r] = queue.front();
    queue.pop_front();
    auto& s = state[static_cast<std::size_t>(r) * cols + c];
    if (s != 1) continue;
    s = 2;
    const int bx = (c0 + c) * size, by = (r0 + r) * size;
    for (int y = by; y < by + size; ++y)
      for (int x = bx; x < bx + size; ++x) bg.set(x, y);
    for (auto [dc, dr] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const int nc = c + dc, nr = r + dr;
      if (nc < 0 || nr < 0 || nc >= cols || nr >= rows) continue;
      if (state[static_cast<std::size_t>(nr) * cols + nc] == 1) queue.emplace_back(nc, nr);
    }
  }
}

}  // namespace

PixelMask::PixelMask(int x0, int y0, int width, int height)
    : x0_(x0), y0_(y0), width_(std::max(width, 0)), height_(std::max(height, 0)),
      bits_(static_cast<std::size_t>(width_) * height_, 0) {}

std::size_t PixelMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool PixelMask::subset_of(const PixelMask& other) const {
  for (int y = y0_; y < y0_ + height_; ++y)
    for (int x = x0_; x < x0_ + width_; ++x)
      if (at(x, y) && !other.at(x, y)) return false;
  return true;
}

PixelMask hull_mask(const Hull& hull, const Image& img) {
  if (hull.vertices.empty()) return {};
  double minx = hull.vertices[0].x, maxx = minx, miny = hull.vertices[0].y, maxy = miny;
  for (const auto& v : hull.vertices) {
    minx = std::min(minx, v.x);
    maxx = std::max(maxx, v.x);
    miny = std::min(miny, v.y);
    maxy = std::max(maxy, v.y);
  }
  const int x0 = std::clamp(static_cast<int>(std::floor(minx)), 0, img.width());
  const int x1 = std::clamp(static_cast<int>(std::ceil(maxx)), 0, img.width());
  const int y0 = std::clamp(static_cast<int>(std::floor(miny)), 0, img.height());
  const int y1 = std::clamp(static_cast<int>(std::ceil(maxy)), 0, img.height());
  PixelMask mask(x0, y0, x1 - x0, y1 - y0);
  for (int y = y0; y < y1; ++y) {
    int left = x0;
    while (left < x1 && !hull.contains({left + 0.5, y + 0.5})) ++left;
    int right = x1 - 1;
    while (right >= left && !hull.contains({right + 0.5, y + 0.5})) --right;
    for (int x = left; x <= right; ++x) mask.set(x, y);
  }
  return mask;
}

PixelMask expand_background(const Region& region, const Hull& hull, const Image& img, const Config& cfg,
                            std::vector<PixelMask>* levels) {
  const PixelMask inside = hull_mask(hull, img);
  PixelMask bg(inside.x0(), inside.y0(), inside.width(), inside.height());
  const int k = region.k();
  for (const auto& b : region.blocks)
    for (int y = b.y0(); y < b.y0() + k; ++y)
      for (int x = b.x0(); x < b.x0() + k; ++x)
        if (inside.at(x, y)) bg.set(x, y);
  if (levels) levels->push_back(bg);
  if (inside.count() == 0) return bg;

  std::vector<int> sizes;
  for (int s = k / 2; s >= cfg.min_block_size && s >= 1; s /= 2) sizes.push_back(s);
  if (sizes.empty() || sizes.back() > 1) sizes.push_back(1);

  const ChannelSums sums(img, inside.x0(), inside.y0(), inside.width(), inside.height());
  for (int s : sizes) {
    grow_level(s, inside, sums, region.mean_color, cfg.color_merge_threshold, bg);
    if (levels) levels->push_back(bg);
  }
  return bg;
}

CandidateArea measure_candidate(const Region& region, const Hull& hull, const Image& img, const Config& cfg) {
  CandidateArea area;
  area.region = region;
  area.hull = hull;
  area.background_mask = expand_background(region, hull, img, cfg);
  const PixelMask inside = hull_mask(hull, img);

  double bg[3] = {0, 0, 0}, fg[3] = {0, 0, 0};
  std::size_t n_bg = 0, n_fg = 0;
  for (int y = inside.y0(); y < inside.y0() + inside.height(); ++y) {
    for (int x = inside.x0(); x < inside.x0() + inside.width(); ++x) {
      if (!inside.at(x, y)) continue;
      const Rgb& p = img.at(x, y);
      double* acc = area.background_mask.at(x, y) ? (++n_bg, bg) : (++n_fg, fg);
      acc[0] += p.r;
      acc[1] += p.g;
      acc[2] += p.b;
    }
  }
  area.bg_color = n_bg ? ColorVec{bg[0] / n_bg, bg[1] / n_bg, bg[2] / n_bg} : region.mean_color;
  if (n_fg) {
    area.fg_color = {fg[0] / n_fg, fg[1] / n_fg, fg[2] / n_fg};
    area.contrast = color_distance(area.bg_color, area.fg_color);
  }
  const std::size_t total = n_bg + n_fg;
  area.text_fraction = total ? double(n_fg) / double(total) : 0.0;
  return area;
}

TextVerdict text_presence(double contrast, double text_fraction, const Config& cfg) {
  if (text_fraction > 0.0 && text_fraction >= cfg.min_text_fraction && contrast >= cfg.text_contrast_threshold)
    return TextVerdict::Text;
  return TextVerdict::NoText;
}

TextVerdict text_presence(const CandidateArea& area, const Config& cfg) {
  return text_presence(area.contrast, area.text_fraction, cfg);
}

}  // namespace textarea
