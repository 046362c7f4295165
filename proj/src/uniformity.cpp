#include "textarea/uniformity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace textarea {

namespace {

// In-place unnormalized Walsh-Hadamard transform, natural (Sylvester) order:
// out[i] = sum_j (-1)^popcount(i & j) in[j].
void fwht(std::span<double> v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = v[j];
        const double b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

double non_dc_energy(std::span<double> channel) {
  fwht(channel);
  double sum = 0.0;
  for (std::size_t i = 1; i < channel.size(); ++i) sum += channel[i] * channel[i];
  return sum;
}

}  // namespace

FilterBasis::FilterBasis(int k) : k_(k) {
  if (k < 2 || !is_power_of_two(k)) throw InputError("filter basis order must be a power of two >= 2");
}

int FilterBasis::entry(std::size_t filter, std::size_t position) const {
  return std::popcount((filter + 1) & position) % 2 == 0 ? 1 : -1;
}

std::vector<std::int8_t> FilterBasis::filter(std::size_t index) const {
  if (index >= size()) throw InputError("filter index out of range");
  std::vector<std::int8_t> out(length());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = static_cast<std::int8_t>(entry(index, p));
  return out;
}

FilterBasis build_basis(int k) { return FilterBasis(k); }

std::vector<double> project_channel(std::span<const double> channel, const FilterBasis& basis) {
  if (channel.size() != basis.length()) throw InputError("channel length does not match basis order");
  std::vector<double> coeffs(channel.begin(), channel.end());
  fwht(coeffs);
  for (double& c : coeffs) c /= basis.norm();
  return coeffs;
}

double score_channels(std::span<const double> r, std::span<const double> g, std::span<const double> b,
                      const FilterBasis& basis) {
  if (r.size() != basis.length() || g.size() != basis.length() || b.size() != basis.length())
    throw InputError("channel length does not match basis order");
  std::vector<double> work(basis.length());
  double energy = 0.0;
  for (auto channel : {r, g, b}) {
    std::copy(channel.begin(), channel.end(), work.begin());
    energy += non_dc_energy(work);
  }
  // Each coefficient is divided by the filter norm k.
  return std::sqrt(energy) / basis.norm();
}

UniformityScore score_block(const Image& img, const BlockCoord& block, const FilterBasis& basis) {
  if (block.k != basis.k()) throw InputError("block size does not match basis order");
  if (!block_inside(img, block)) throw InputError("block lies outside the image");
  const std::size_t n = basis.length();
  std::vector<double> r(n), g(n), b(n);
  std::size_t i = 0;
  for (int y = block.y0(); y < block.y0() + block.k; ++y) {
    for (const Rgb& p : img.row(y).subspan(block.x0(), block.k)) {
      r[i] = p.r;
      g[i] = p.g;
      b[i] = p.b;
      ++i;
    }
  }
  return {block, score_channels(r, g, b, basis)};
}

std::vector<UniformityScore> score_grid(const Image& img, const GridShape& grid, const FilterBasis& basis) {
  if (grid.k != basis.k()) throw InputError("grid block size does not match basis order");
  std::vector<UniformityScore> out;
  out.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(score_block(img, grid.at(i), basis));
  return out;
}

SelectionCut selection_cut(std::span<const double> scores, const SelectionRule& rule) {
  if (scores.empty()) throw InputError("cannot select from an empty score list");
  if (rule.kind == SelectionKind::MeanMinusStd) {
    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= double(scores.size());
    double var = 0.0;
    for (double s : scores) var += (s - mean) * (s - mean);
    var /= double(scores.size());
    return {mean - std::sqrt(var), false};
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  const double exact_rank = rule.percentile / 100.0 * double(sorted.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(exact_rank));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return {sorted[rank - 1], true};
}

std::vector<BlockCoord> select_uniform_blocks(std::span<const UniformityScore> scores,
                                              const SelectionRule& rule) {
  if (scores.empty()) return {};
  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& s : scores) values.push_back(s.score);
  const SelectionCut cut = selection_cut(values, rule);
  std::vector<BlockCoord> out;
  for (const auto& s : scores)
    if (cut.accepts(s.score)) out.push_back(s.block);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint8_t> score_heatmap(std::span<const UniformityScore> scores, const GridShape& grid) {
  std::vector<std::uint8_t> out(grid.size(), 0);
  double max_score = 0.0;
  for (const auto& s : scores) max_score = std::max(max_score, s.score);
  if (max_score <= 0.0) return out;
  for (const auto& s : scores) {
    if (!grid.contains(s.block.col, s.block.row)) continue;
    out[grid.index(s.block)] = static_cast<std::uint8_t>(std::lround(255.0 * s.score / max_score));
  }
  return out;
}

}  // namespace textarea
