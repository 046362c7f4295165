#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace textarea {

/// Raised for caller mistakes: malformed images, out-of-range parameters,
/// mismatched inputs. Anything else escaping the library is an internal error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
  friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

/// Row-major 8-bit RGB raster.
class Image {
 public:
  Image(int width, int height, Rgb fill = {});
  Image(int width, int height, std::vector<Rgb> pixels);

  int width() const { return width_; }
  int height() const { return height_; }

  const Rgb& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb& at(int x, int y) { return pixels_[index(x, y)]; }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  std::span<const Rgb> pixels() const { return pixels_; }
  std::span<const Rgb> row(int y) const {
    return std::span<const Rgb>(pixels_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

/// Real-valued mean color, channels in [0, 255].
struct ColorVec {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  friend bool operator==(const ColorVec&, const ColorVec&) = default;
};

inline ColorVec to_color(Rgb p) { return {double(p.r), double(p.g), double(p.b)}; }

/// Euclidean distance in raw RGB.
double color_distance(const ColorVec& a, const ColorVec& b);

/// Largest possible color_distance between two 8-bit colors, 255 * sqrt(3).
inline constexpr double kMaxColorDistance = 441.6729559300637;

enum class SelectionKind { MeanMinusStd, Percentile };

/// How uniform blocks are picked out of a scored grid.
struct SelectionRule {
  SelectionKind kind = SelectionKind::MeanMinusStd;
  double percentile = 0.0;  // only for SelectionKind::Percentile, in [0, 100]

  static SelectionRule mean_minus_std() { return {}; }
  static SelectionRule at_percentile(double q) { return {SelectionKind::Percentile, q}; }

  /// "mean-std" or "pN" (e.g. "p20").
  static SelectionRule parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const SelectionRule&, const SelectionRule&) = default;
};

struct Config {
  int min_block_size = 8;
  double color_merge_threshold = 45.0;
  double peak_separation_threshold = 100.0;
  double text_contrast_threshold = 100.0;
  double solidity_threshold = 0.95;
  double min_text_fraction = 0.01;
  bool stop_at_first_detection = true;
  SelectionRule selection_rule;

  /// Throws InputError on an invalid field.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

constexpr bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// One k x k tile of the grid at a given scale.
struct BlockCoord {
  int col = 0;
  int row = 0;
  int k = 0;

  int x0() const { return col * k; }
  int y0() const { return row * k; }

  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
  // Row-major order.
  friend auto operator<=>(const BlockCoord& a, const BlockCoord& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    if (auto c = a.row <=> b.row; c != 0) return c;
    return a.col <=> b.col;
  }
};

/// Tiling of an image into full k x k blocks. The right and bottom remainder
/// strips (narrower than k) are not part of the grid.
struct GridShape {
  int k = 0;
  int cols = 0;
  int rows = 0;

  static GridShape tile(const Image& img, int k);

  std::size_t size() const { return static_cast<std::size_t>(cols) * rows; }
  bool contains(int col, int row) const { return col >= 0 && row >= 0 && col < cols && row < rows; }
  BlockCoord at(int col, int row) const { return {col, row, k}; }
  BlockCoord at(std::size_t index) const { return {int(index % cols), int(index / cols), k}; }
  std::size_t index(const BlockCoord& b) const { return static_cast<std::size_t>(b.row) * cols + b.col; }
};

/// Per-channel mean over the k^2 pixels of the block.
ColorVec block_mean_color(const Image& img, const BlockCoord& block);

bool block_inside(const Image& img, const BlockCoord& block);

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

using Polygon = std::vector<Point>;

}  // namespace textarea
