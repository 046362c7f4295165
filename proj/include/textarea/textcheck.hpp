#pragma once

#include <cstdint>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/regiongraph.hpp"
#include "textarea/shape.hpp"

namespace textarea {

/// Boolean raster over a window of the image.
class PixelMask {
 public:
  PixelMask() = default;
  PixelMask(int x0, int y0, int width, int height);

  int x0() const { return x0_; }
  int y0() const { return y0_; }
  int width() const { return width_; }
  int height() const { return height_; }

  /// Image coordinates; false outside the window.
  bool at(int x, int y) const {
    return x >= x0_ && y >= y0_ && x < x0_ + width_ && y < y0_ + height_ && bits_[offset(x, y)] != 0;
  }
  void set(int x, int y, bool v = true) { bits_[offset(x, y)] = v ? 1 : 0; }
  std::size_t count() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  /// True when every set pixel of this mask is also set in `other`.
  bool subset_of(const PixelMask& other) const;

  friend bool operator==(const PixelMask&, const PixelMask&) = default;

 private:
  std::size_t offset(int x, int y) const { return static_cast<std::size_t>(y - y0_) * width_ + (x - x0_); }

  int x0_ = 0, y0_ = 0, width_ = 0, height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Pixels of the image whose centres lie inside or on the hull.
PixelMask hull_mask(const Hull& hull, const Image& img);

/// Grows the region's own pixels inside the hull. Block sizes k/2, k/4, ...,
/// cfg.min_block_size are tried in turn, then single pixels. At each size, an
/// aligned sub-block fully inside the hull is claimed when it shares an edge
/// with the background claimed so far and its mean color lies within
/// cfg.color_merge_threshold of the region mean; claiming repeats until
/// nothing changes. When `levels` is given, the mask after the seed and after
/// each size is appended to it.
PixelMask expand_background(const Region& region, const Hull& hull, const Image& img, const Config& cfg,
                            std::vector<PixelMask>* levels = nullptr);

/// A shape-tested region with its background/foreground color split.
struct CandidateArea {
  Region region;
  Hull hull;
  PixelMask background_mask;
  ColorVec bg_color;
  /// Mean of hull pixels outside the background; zero when there are none.
  ColorVec fg_color;
  /// color_distance(bg_color, fg_color), or 0 when the foreground is empty.
  double contrast = 0.0;
  /// Non-background share of the hull pixels.
  double text_fraction = 0.0;
};

CandidateArea measure_candidate(const Region& region, const Hull& hull, const Image& img, const Config& cfg);

enum class TextVerdict { Text, NoText };

TextVerdict text_presence(double contrast, double text_fraction, const Config& cfg);
TextVerdict text_presence(const CandidateArea& area, const Config& cfg);

}  // namespace textarea
