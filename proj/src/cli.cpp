#include "textarea/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "textarea/image_io.hpp"
#include "textarea/result_json.hpp"
#include "textarea/synthbench.hpp"

namespace textarea::cli {

namespace fs = std::filesystem;

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw io::IoError("cannot write '" + path.string() + "'");
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  const double t = len2 > 0.0 ? std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0) : 0.0;
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

struct DetectArgs {
  std::string image;
  std::string out;
  std::string debug_dir;
  std::string selection_rule = "mean-std";
  bool all_scales = false;
  int verbosity = 0;
  Config config;
};

DetectionResult detect_with_dumps(const fs::path& dir, const Image& img, const Config& cfg, std::ostream& err,
                                  int verbosity) {
  fs::create_directories(dir);
  int candidate = 0;
  ScaleObserver obs;
  obs.on_scores = [&](const GridShape& grid, std::span<const UniformityScore> scores) {
    io::write_pgm(dir / ("scores_k" + std::to_string(grid.k) + ".pgm"), grid.cols, grid.rows,
                  score_heatmap(scores, grid));
  };
  obs.on_regions = [&](const GridShape& grid, std::span<const Region> regions) {
    std::vector<Rgb> palette{{0, 0, 0}};
    synth::Rng rng(static_cast<std::uint64_t>(grid.k));
    for (int i = 1; i < 256; ++i)
      palette.push_back({static_cast<std::uint8_t>(rng.range(40, 255)), static_cast<std::uint8_t>(rng.range(40, 255)),
                         static_cast<std::uint8_t>(rng.range(40, 255))});
    std::vector<std::uint8_t> labels(grid.size(), 0);
    for (std::size_t i = 0; i < regions.size(); ++i)
      for (const auto& b : regions[i].blocks) labels[grid.index(b)] = static_cast<std::uint8_t>(1 + i % 255);
    io::write_indexed_png(dir / ("regions_k" + std::to_string(grid.k) + ".png"), grid.cols, grid.rows, labels, palette);
    if (verbosity > 0) err << "scale " << grid.k << ": " << regions.size() << " regions\n";
  };
  obs.on_candidate = [&](const CandidateArea& area, TextVerdict verdict) {
    const auto& m = area.background_mask;
    if (m.width() > 0 && m.height() > 0) {
      io::write_pbm(dir / ("candidate_k" + std::to_string(area.region.k()) + "_" + std::to_string(candidate) + ".pbm"),
                    m.width(), m.height(), m.bits());
    }
    if (verbosity > 0)
      err << "  candidate " << candidate << " (region " << area.region.id << "): contrast " << area.contrast
          << ", text fraction " << area.text_fraction << " -> "
          << (verdict == TextVerdict::Text ? "text" : "no text") << "\n";
    ++candidate;
  };
  return detect(img, cfg, &obs);
}

int cmd_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  Config cfg = a.config;
  cfg.stop_at_first_detection = !a.all_scales;
  cfg.selection_rule = SelectionRule::parse(a.selection_rule);
  cfg.validate();
  const Image img = io::read_image(a.image);

  const auto start = std::chrono::steady_clock::now();
  const DetectionResult result =
      a.debug_dir.empty() ? detect(img, cfg) : detect_with_dumps(a.debug_dir, img, cfg, err, a.verbosity);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (a.verbosity > 0)
    err << a.image << ": " << result.detections.size() << " detection(s) in " << elapsed << " s\n";

  const std::string json = to_json(result);
  if (a.out.empty())
    out << json;
  else
    write_text(a.out, json);
  return kOk;
}

int cmd_overlay(const std::string& image, const std::string& result_path, const std::string& out_path) {
  const Image img = io::read_image(image);
  const DetectionResult result = parse_result_json(read_text(result_path));
  if (result.width != img.width() || result.height != img.height())
    throw InputError("result describes a " + std::to_string(result.width) + "x" + std::to_string(result.height) +
                     " image but '" + image + "' is " + std::to_string(img.width()) + "x" +
                     std::to_string(img.height()));
  io::write_png(out_path, render_overlay(img, result));
  return kOk;
}

int cmd_synth(const synth::CorpusOptions& options, const std::string& dir, std::ostream& err, int verbosity) {
  const auto truths = synth::write_corpus(options, dir);
  if (verbosity > 0) err << "wrote " << truths.size() << " images to " << dir << "\n";
  return kOk;
}

int cmd_eval(const std::string& corpus, const std::string& results_dir, const std::string& out_path,
             std::ostream& out) {
  const auto truths = synth::read_manifest(fs::path(corpus) / "manifest.json");
  std::vector<std::pair<std::string, DetectionResult>> results;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(results_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) results.emplace_back(f.filename().string(), parse_result_json(read_text(f)));
  const std::string json = synth::to_json(synth::evaluate(results, truths));
  if (out_path.empty())
    out << json;
  else
    write_text(out_path, json);
  return kOk;
}

}  // namespace

Image render_overlay(const Image& img, const DetectionResult& result, Rgb color) {
  Image out = img;
  const int w = img.width(), h = img.height();
  for (const auto& d : result.detections) {
    const std::size_t n = d.hull.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& p = d.hull[i];
      const Point& q = d.hull[(i + 1) % n];
      const double ax = std::clamp(p.x, 0.0, w - 1.0), ay = std::clamp(p.y, 0.0, h - 1.0);
      const double bx = std::clamp(q.x, 0.0, w - 1.0), by = std::clamp(q.y, 0.0, h - 1.0);
      const int x0 = std::max(0, static_cast<int>(std::floor(std::min(ax, bx))) - 1);
      const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(ax, bx))) + 1);
      const int y0 = std::max(0, static_cast<int>(std::floor(std::min(ay, by))) - 1);
      const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(ay, by))) + 1);
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
          if (segment_distance(x, y, ax, ay, bx, by) <= 1.0) out.at(x, y) = color;
    }
  }
  return out;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Find text areas in natural images by locating uniform backgrounds with holes."};
  app.name("textarea");
  app.require_subcommand(1);
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "More diagnostics on stderr (repeatable)");

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "Detect text areas and print the result JSON");
  detect_cmd->add_option("image", det.image, "PNG or binary PPM input")->required();
  detect_cmd->add_option("--out", det.out, "Write JSON here instead of stdout");
  detect_cmd->add_option("--min-block", det.config.min_block_size, "Smallest block size (power of two)")
      ->capture_default_str();
  detect_cmd
      ->add_option("--color-merge-threshold", det.config.color_merge_threshold,
                   "Max RGB distance for grouping, merging and background growth")
      ->capture_default_str();
  detect_cmd
      ->add_option("--peak-separation", det.config.peak_separation_threshold,
                   "Min distance between gap color peaks for a bimodal merge")
      ->capture_default_str();
  detect_cmd->add_option("--text-contrast", det.config.text_contrast_threshold, "Min background/text distance")
      ->capture_default_str();
  detect_cmd->add_option("--solidity", det.config.solidity_threshold, "Solidity at which a region counts as convex")
      ->capture_default_str();
  detect_cmd
      ->add_option("--min-text-fraction", det.config.min_text_fraction, "Min non-background share of the hull")
      ->capture_default_str();
  detect_cmd->add_flag("--all-scales", det.all_scales, "Keep descending after the first scale with text");
  detect_cmd->add_option("--selection-rule", det.selection_rule, "Uniform block rule: mean-std or pN")
      ->capture_default_str();
  detect_cmd->add_option("--debug-dir", det.debug_dir, "Write score maps, region maps and background masks here");

  std::string ov_image, ov_result, ov_out;
  auto* overlay_cmd = app.add_subcommand("overlay", "Draw detection hulls onto the image");
  overlay_cmd->add_option("image", ov_image, "Image the result was computed on")->required();
  overlay_cmd->add_option("result", ov_result, "Result JSON from detect")->required();
  overlay_cmd->add_option("--out", ov_out, "Output PNG")->required();

  synth::CorpusOptions corpus;
  std::string synth_dir, background = "noise";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic sign corpus with manifest.json");
  synth_cmd->add_option("--count", corpus.count, "Images with text")->capture_default_str();
  synth_cmd->add_option("--negatives", corpus.negatives, "Images with a blank sign")->capture_default_str();
  synth_cmd->add_option("--seed", corpus.seed, "Corpus seed")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth_dir, "Output directory")->required();
  synth_cmd->add_option("--contrast", corpus.synth.contrast, "RGB distance between sign and glyphs")
      ->capture_default_str();
  synth_cmd->add_option("--background", background, "flat, gradient or noise")->capture_default_str();
  synth_cmd->add_option("--width", corpus.synth.width, "Image width")->capture_default_str();
  synth_cmd->add_option("--height", corpus.synth.height, "Image height")->capture_default_str();

  std::string eval_corpus, eval_results, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score detect results against a synthetic corpus");
  eval_cmd->add_option("--corpus", eval_corpus, "Corpus directory holding manifest.json")->required();
  eval_cmd->add_option("--results", eval_results, "Directory of <image-stem>.json results")->required();
  eval_cmd->add_option("--out", eval_out, "Write the report here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    det.verbosity = verbosity;
    if (*detect_cmd) return cmd_detect(det, out, err);
    if (*overlay_cmd) return cmd_overlay(ov_image, ov_result, ov_out);
    if (*synth_cmd) {
      corpus.synth.background = synth::parse_background(background);
      return cmd_synth(corpus, synth_dir, err, verbosity);
    }
    if (*eval_cmd) return cmd_eval(eval_corpus, eval_results, eval_out, out);
  } catch (const InputError& e) {
    err << "textarea: " << e.what() << "\n";
    return kInputError;
  } catch (const fs::filesystem_error& e) {
    err << "textarea: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "textarea: internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace textarea::cli
