#pragma once

#include <functional>
#include <span>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/regiongraph.hpp"
#include "textarea/shape.hpp"
#include "textarea/textcheck.hpp"
#include "textarea/uniformity.hpp"

namespace textarea {

struct Detection {
  int scale = 0;
  Polygon hull;
  ColorVec bg_color;
  ColorVec fg_color;
  double contrast = 0.0;
  double text_fraction = 0.0;
};

struct DetectionResult {
  int width = 0;
  int height = 0;
  Config config;
  /// Strictly decreasing block sizes, in visiting order.
  std::vector<int> scales_visited;
  std::vector<Detection> detections;
};

/// Largest power of two not above min(width, height) / 4, floored at
/// cfg.min_block_size. Throws InputError when either side is below
/// 2 * cfg.min_block_size.
int initial_block_size(const Image& img, const Config& cfg);

/// initial_block_size, then successive halvings down to cfg.min_block_size.
std::vector<int> scale_schedule(const Image& img, const Config& cfg);

/// Intermediate products, for debug dumps and tests.
struct ScaleObserver {
  std::function<void(const GridShape&, std::span<const UniformityScore>)> on_scores;
  std::function<void(const GridShape&, std::span<const Region>)> on_regions;
  std::function<void(const CandidateArea&, TextVerdict)> on_candidate;
};

/// All text detections at one block size.
std::vector<Detection> detect_at_scale(const Image& img, int k, const Config& cfg,
                                       const ScaleObserver* observer = nullptr);

/// Coarse-to-fine search. Stops at the first scale with a detection when
/// cfg.stop_at_first_detection is set; otherwise visits every scale and
/// keeps, among hulls from different scales overlapping by IoU > 0.5, the
/// one with higher contrast.
DetectionResult detect(const Image& img, const Config& cfg, const ScaleObserver* observer = nullptr);

}  // namespace textarea
