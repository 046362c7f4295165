#include "textarea/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace textarea {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be positive");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

Image::Image(int width, int height, std::vector<Rgb> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * height)
    throw InputError("pixel count does not match image dimensions");
}

double color_distance(const ColorVec& a, const ColorVec& b) {
  const double dr = a.r - b.r;
  const double dg = a.g - b.g;
  const double db = a.b - b.b;
  return std::sqrt(dr * dr + dg * dg + db * db);
}

SelectionRule SelectionRule::parse(const std::string& text) {
  if (text == "mean-std") return mean_minus_std();
  if (text.size() >= 2 && text[0] == 'p') {
    double q = 0.0;
    const char* first = text.data() + 1;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, q);
    if (ec == std::errc() && ptr == last && q >= 0.0 && q <= 100.0) return at_percentile(q);
  }
  throw InputError("selection rule must be 'mean-std' or 'pN' with N in [0, 100], got '" + text + "'");
}

std::string SelectionRule::to_string() const {
  if (kind == SelectionKind::MeanMinusStd) return "mean-std";
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%g", percentile);
  return buf;
}

void Config::validate() const {
  if (min_block_size < 2 || !is_power_of_two(min_block_size))
    throw InputError("min_block_size must be a power of two >= 2");
  // Thresholds above the largest RGB distance are accepted; they simply never fire.
  auto check_distance = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw InputError(std::string(name) + " must be a finite non-negative distance");
  };
  check_distance(color_merge_threshold, "color_merge_threshold");
  check_distance(peak_separation_threshold, "peak_separation_threshold");
  check_distance(text_contrast_threshold, "text_contrast_threshold");
  if (!(solidity_threshold > 0.0 && solidity_threshold <= 1.0))
    throw InputError("solidity_threshold must be in (0, 1]");
  if (!(min_text_fraction >= 0.0 && min_text_fraction <= 1.0))
    throw InputError("min_text_fraction must be in [0, 1]");
  if (selection_rule.kind == SelectionKind::Percentile &&
      !(selection_rule.percentile >= 0.0 && selection_rule.percentile <= 100.0))
    throw InputError("selection percentile must be in [0, 100]");
}

GridShape GridShape::tile(const Image& img, int k) {
  if (k < 1) throw InputError("block size must be positive");
  return {k, img.width() / k, img.height() / k};
}

bool block_inside(const Image& img, const BlockCoord& block) {
  return block.k >= 1 && block.col >= 0 && block.row >= 0 &&
         static_cast<long>(block.col + 1) * block.k <= img.width() &&
         static_cast<long>(block.row + 1) * block.k <= img.height();
}

ColorVec block_mean_color(const Image& img, const BlockCoord& block) {
  if (!block_inside(img, block)) throw InputError("block lies outside the image");
  std::uint64_t sr = 0, sg = 0, sb = 0;
  for (int y = block.y0(); y < block.y0() + block.k; ++y) {
    auto row = img.row(y).subspan(block.x0(), block.k);
    for (const Rgb& p : row) {
      sr += p.r;
      sg += p.g;
      sb += p.b;
    }
  }
  const double n = double(block.k) * block.k;
  return {sr / n, sg / n, sb / n};
}

}  // namespace textarea
