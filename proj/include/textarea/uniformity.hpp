#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "textarea/core.hpp"

namespace textarea {

/// The 2-D Walsh-Hadamard filters of order k without the DC (all +1) filter:
/// k^2 - 1 filters over a row-major k x k block, every entry +1 or -1, every
/// filter summing to zero, all mutually orthogonal with norm k.
///
/// Filter i is Sylvester Hadamard row i + 1 of order k^2, so entries are
/// generated on demand rather than stored; at k = 256 the dense basis would
/// need four gigabytes.
class FilterBasis {
 public:
  /// Throws InputError unless k is a power of two >= 2.
  explicit FilterBasis(int k);

  int k() const { return k_; }
  /// Number of filters, k^2 - 1.
  std::size_t size() const { return length() - 1; }
  /// Entries per filter, k^2.
  std::size_t length() const { return static_cast<std::size_t>(k_) * k_; }
  double norm() const { return k_; }

  /// +1 or -1.
  int entry(std::size_t filter, std::size_t position) const;
  std::vector<std::int8_t> filter(std::size_t index) const;

 private:
  int k_;
};

FilterBasis build_basis(int k);

struct UniformityScore {
  BlockCoord block;
  double score = 0.0;
};

/// Projection of one channel vector (row-major, length k^2) onto the
/// Hadamard rows, each divided by the filter norm k. Element 0 is the DC
/// projection; elements 1.. line up with FilterBasis filters 0...
std::vector<double> project_channel(std::span<const double> channel, const FilterBasis& basis);

/// L2 norm of all non-DC coefficients of the three channels. The channels
/// are taken as given (no clamping), which lets tests shift them freely.
double score_channels(std::span<const double> r, std::span<const double> g, std::span<const double> b,
                      const FilterBasis& basis);

UniformityScore score_block(const Image& img, const BlockCoord& block, const FilterBasis& basis);

/// Scores for every block of the grid, in grid index order.
std::vector<UniformityScore> score_grid(const Image& img, const GridShape& grid, const FilterBasis& basis);

/// Scores below this value (or at it, when `inclusive`) are uniform.
struct SelectionCut {
  double value = 0.0;
  bool inclusive = false;

  bool accepts(double score) const { return inclusive ? score <= value : score < value; }
};

/// MeanMinusStd: mean minus population standard deviation, strict.
/// Percentile(q): nearest-rank q-th percentile score, inclusive.
SelectionCut selection_cut(std::span<const double> scores, const SelectionRule& rule);

/// Uniform blocks in row-major order. May be empty.
std::vector<BlockCoord> select_uniform_blocks(std::span<const UniformityScore> scores,
                                              const SelectionRule& rule);

/// One gray value per block, score scaled linearly so the maximum maps to 255.
std::vector<std::uint8_t> score_heatmap(std::span<const UniformityScore> scores, const GridShape& grid);

}  // namespace textarea
