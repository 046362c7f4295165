#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"
#include "textarea/image_io.hpp"
#include "textarea/pipeline.hpp"
#include "textarea/result_json.hpp"
#include "textarea/shape.hpp"
#include "textarea/synthbench.hpp"
#include "textarea/uniformity.hpp"

using namespace textarea;

namespace {

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s  %s  (%s)\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

struct CorpusRun {
  synth::EvalReport eval;
  double max_seconds = 0.0;
  double mean_seconds = 0.0;
};

// Generates a corpus on disk, then reads and detects every image the way the
// command line does.
CorpusRun run_corpus(const synth::CorpusOptions& options, const std::filesystem::path& dir) {
  const auto truths = synth::write_corpus(options, dir);
  std::vector<std::pair<std::string, DetectionResult>> results;
  CorpusRun run;
  const Config cfg;
  for (const auto& t : truths) {
    const auto start = std::chrono::steady_clock::now();
    const Image img = io::read_image(dir / t.file);
    DetectionResult r = detect(img, cfg);
    const std::string json = to_json(r);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    run.max_seconds = std::max(run.max_seconds, seconds);
    run.mean_seconds += seconds / double(truths.size());
    results.emplace_back(t.file, std::move(r));
  }
  run.eval = synth::evaluate(results, truths);
  return run;
}

void synthetic_recall(const testing::TempDir& tmp) {
  synth::CorpusOptions options;
  options.count = 50;
  options.seed = 1;
  options.synth.contrast = 200;
  options.synth.background = synth::Background::Noise;
  const auto run = run_corpus(options, tmp / "recall");
  report(run.eval.recall >= 0.90, "synthetic recall >= 0.90 at IoU 0.5 on 50 noise images",
         fmt("recall %.3f", run.eval.recall));
  report(run.max_seconds < 5.0, "runtime < 5 s per 1024x768 image",
         fmt("max %.3f s, mean %.3f s", run.max_seconds, run.mean_seconds));
}

void negative_control(const testing::TempDir& tmp) {
  synth::CorpusOptions options;
  options.count = 0;
  options.negatives = 20;
  options.seed = 1;
  const auto run = run_corpus(options, tmp / "negatives");
  report(run.eval.fp_image_rate <= 0.10, "negative control false-positive image rate <= 0.10 on 20 blank signs",
         fmt("fp image rate %.3f", run.eval.fp_image_rate));
}

void contrast_floor(const testing::TempDir& tmp) {
  synth::CorpusOptions options;
  options.count = 50;
  options.seed = 1;
  options.synth.contrast = 50;
  const auto run = run_corpus(options, tmp / "lowcontrast");
  report(run.eval.recall <= 0.10, "contrast 50 corpus recall <= 0.10", fmt("recall %.3f", run.eval.recall));
}

void basis_property() {
  bool ok = true;
  for (int k : {2, 4, 8, 16}) {
    const auto basis = build_basis(k);
    std::vector<std::vector<std::int8_t>> filters;
    for (std::size_t f = 0; f < basis.size(); ++f) filters.push_back(basis.filter(f));
    ok &= filters.size() == std::size_t(k) * k - 1;
    for (std::size_t f = 0; f < filters.size(); ++f) {
      long sum = 0;
      for (auto v : filters[f]) {
        ok &= v == 1 || v == -1;
        sum += v;
      }
      ok &= sum == 0;
      for (std::size_t g = f + 1; g < filters.size(); ++g) {
        long dot = 0;
        for (std::size_t p = 0; p < filters[f].size(); ++p) dot += filters[f][p] * filters[g][p];
        ok &= dot == 0;
      }
    }
  }
  report(ok, "property (a) basis zero-sum, +-1 entries, orthogonal for k in 2..16", "exact integer check");
}

void score_property() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> pick_k(1, 4);
  int iff_ok = 0, offset_ok = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int k = 1 << pick_k(rng);
    const auto basis = build_basis(k);
    Image img(k, k);
    const bool constant = t % 2 == 0;
    const Rgb base = testing::random_rgb(rng);
    for (int y = 0; y < k; ++y)
      for (int x = 0; x < k; ++x) img.at(x, y) = constant ? base : testing::random_rgb(rng);
    if (!constant && img.at(k - 1, k - 1) == img.at(0, 0)) img.at(k - 1, k - 1).r ^= 1;
    const double s = score_block(img, {0, 0, k}, basis).score;
    iff_ok += constant ? s == 0.0 : s > 0.0;

    const auto c = testing::random_block(k, rng);
    const double before = score_channels(c.r, c.g, c.b, basis);
    std::uniform_real_distribution<double> offset_dist(-100.0, 100.0);
    const double offset = offset_dist(rng);
    auto shifted = c;
    for (auto* ch : {&shifted.r, &shifted.g, &shifted.b})
      for (double& v : *ch) v += offset;
    const double diff = std::abs(score_channels(shifted.r, shifted.g, shifted.b, basis) - before);
    worst = std::max(worst, diff / std::max(1.0, before));
    offset_ok += diff <= 1e-9 * std::max(1.0, before);
  }
  report(iff_ok == 1000 && offset_ok == 1000, "property (b) score zero iff constant, offset invariant on 1000 blocks",
         fmt("%.0f/1000 zero-iff, worst relative offset change %.2e", iff_ok, worst));
}

void parseval_property() {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int k : {2, 4, 8, 16}) {
    const auto basis = build_basis(k);
    for (int t = 0; t < 25; ++t) {
      const auto c = testing::random_block(k, rng);
      for (const auto* ch : {&c.r, &c.g, &c.b}) {
        const auto coef = project_channel(*ch, basis);
        for (std::size_t p = 0; p < basis.length(); ++p) {
          double v = coef[0];
          for (std::size_t f = 0; f < basis.size(); ++f) v += coef[f + 1] * basis.entry(f, p);
          worst = std::max(worst, std::abs(v / basis.norm() - (*ch)[p]));
        }
      }
    }
  }
  report(worst < 1e-6, "property (c) reconstruction from coefficients", fmt("worst error %.2e", worst));
}

void hull_property() {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_int_distribution<int> size(1, 50);
  int agree = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<Point> pts(size(rng));
    for (auto& p : pts) p = {coord(rng), coord(rng)};
    const auto hull = convex_hull(pts);
    agree += std::set<Point>(hull.vertices.begin(), hull.vertices.end()) == testing::brute_hull(pts);
  }
  report(agree == 200, "property (d) convex hull equals triangle-elimination oracle on 200 point sets",
         fmt("%.0f/200 agree", agree));
}

void grouping_property() {
  std::mt19937_64 rng(109);
  const std::vector<Rgb> palette{{200, 200, 200}, {210, 205, 200}, {200, 200, 246}, {30, 30, 30}, {235, 215, 200}};
  const Config cfg;
  constexpr int K = 8;
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<int> dim(1, 8);
    std::uniform_int_distribution<int> pick(0, int(palette.size()) - 1);
    const int cols = dim(rng), rows = dim(rng);
    Image img(cols * K, rows * K);
    std::vector<BlockCoord> uniform;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        testing::fill_rect(img, c * K, r * K, (c + 1) * K, (r + 1) * K, palette[pick(rng)]);
        if (rng() % 3 != 0) uniform.push_back({c, r, K});
      }
    }
    std::shuffle(uniform.begin(), uniform.end(), rng);
    agree += testing::partition(group_connected(uniform, img, cfg)) ==
             testing::grouping_oracle(uniform, img, cols, cfg);
  }
  report(agree == 100, "property (e) grouping equals brute-force union-find on 100 grids",
         fmt("%.0f/100 agree", agree));
}

void determinism_property(const testing::TempDir& tmp) {
  synth::CorpusOptions options;
  options.count = 10;
  options.seed = 1;
  const auto dir = tmp / "determinism";
  const auto truths = synth::write_corpus(options, dir);
  int identical = 0;
  for (const auto& t : truths) {
    const auto first = to_json(detect(io::read_image(dir / t.file), Config{}));
    const auto second = to_json(detect(io::read_image(dir / t.file), Config{}));
    identical += first == second;
  }
  report(identical == 10, "property (f) byte-identical JSON across two runs on 10 corpus images",
         fmt("%.0f/10 identical", identical));
}

void worked_examples() {
  Image block(2, 2, Rgb{255, 255, 255});
  block.at(0, 0) = {0, 0, 0};
  block.at(1, 0) = {0, 0, 0};
  const double score = score_block(block, {0, 0, 2}, build_basis(2)).score;
  report(std::abs(score - 441.67) <= 0.01, "worked example: half-black block scores 441.67 +- 0.01",
         fmt("score %.4f", score));

  const std::vector<double> scores{10, 12, 11, 200, 210, 205, 198, 202};
  const double cut = selection_cut(scores, SelectionRule::mean_minus_std()).value;
  report(std::abs(cut - 38.0) <= 0.01, "worked example: mean-minus-std threshold 38.0 +- 0.01",
         fmt("threshold %.4f", cut));

  const std::vector<BlockCoord> l_shape{{0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  const double sol = solidity(RegionMask::from_blocks(l_shape));
  report(std::abs(sol - 0.75) <= 0.01, "worked example: L-shape solidity 0.75 +- 0.01", fmt("solidity %.4f", sol));
}

}  // namespace

int main() {
  const testing::TempDir tmp("acceptance");
  synthetic_recall(tmp);
  negative_control(tmp);
  contrast_floor(tmp);
  basis_property();
  score_property();
  parseval_property();
  hull_property();
  grouping_property();
  determinism_property(tmp);
  worked_examples();
  std::printf("%d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
