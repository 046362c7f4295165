#include "textarea/pipeline.hpp"

#include <algorithm>

#include "textarea/polygon.hpp"

namespace textarea {

int initial_block_size(const Image& img, const Config& cfg) {
  cfg.validate();
  const int shorter = std::min(img.width(), img.height());
  if (shorter < 2 * cfg.min_block_size)
    throw InputError("image is smaller than twice the minimum block size");
  int k = 1;
  while (k * 2 <= shorter / 4) k *= 2;
  return std::max(k, cfg.min_block_size);
}

std::vector<int> scale_schedule(const Image& img, const Config& cfg) {
  std::vector<int> out;
  for (int k = initial_block_size(img, cfg); k >= cfg.min_block_size; k /= 2) out.push_back(k);
  return out;
}

std::vector<Detection> detect_at_scale(const Image& img, int k, const Config& cfg, const ScaleObserver* observer) {
  const GridShape grid = GridShape::tile(img, k);
  if (grid.size() == 0) return {};
  const FilterBasis basis(k);

  const auto scores = score_grid(img, grid, basis);
  if (observer && observer->on_scores) observer->on_scores(grid, scores);

  const auto uniform = select_uniform_blocks(scores, cfg.selection_rule);
  const auto regions = merge_regions(group_connected(uniform, img, cfg), img, cfg);
  if (observer && observer->on_regions) observer->on_regions(grid, regions);

  std::vector<Detection> out;
  for (const auto& region : regions) {
    const RegionMask mask = RegionMask::from_region(region);
    if (shape_test(mask, cfg) == ShapeVerdict::Eliminate) continue;
    const Hull hull = region_hull(mask);
    const CandidateArea area = measure_candidate(region, hull, img, cfg);
    const TextVerdict verdict = text_presence(area, cfg);
    if (observer && observer->on_candidate) observer->on_candidate(area, verdict);
    if (verdict != TextVerdict::Text) continue;
    out.push_back({k, hull.vertices, area.bg_color, area.fg_color, area.contrast, area.text_fraction});
  }
  return out;
}

DetectionResult detect(const Image& img, const Config& cfg, const ScaleObserver* observer) {
  cfg.validate();
  DetectionResult result;
  result.width = img.width();
  result.height = img.height();
  result.config = cfg;

  for (int k : scale_schedule(img, cfg)) {
    result.scales_visited.push_back(k);
    auto found = detect_at_scale(img, k, cfg, observer);
    if (cfg.stop_at_first_detection) {
      if (!found.empty()) {
        result.detections = std::move(found);
        break;
      }
      continue;
    }
    // Earlier scales were deduplicated already; only cross-scale overlaps count.
    const std::size_t previous = result.detections.size();
    for (auto& d : found) {
      bool absorbed = false;
      for (std::size_t i = 0; i < previous; ++i) {
        Detection& kept = result.detections[i];
        if (polygon_iou(kept.hull, d.hull) <= 0.5) continue;
        if (d.contrast > kept.contrast) kept = d;
        absorbed = true;
        break;
      }
      if (!absorbed) result.detections.push_back(std::move(d));
    }
  }
  return result;
}

}  // namespace textarea
