#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/pipeline.hpp"
#include "textarea/polygon.hpp"

namespace textarea::synth {

enum class Background { Flat, Gradient, Noise };

const char* to_string(Background b);
Background parse_background(const std::string& text);

/// Seeded generator with distributions written out here, so corpora are
/// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int range(int lo, int hi);
  double normal();

 private:
  std::mt19937_64 engine_;
};

struct SynthSpec {
  int width = 1024;
  int height = 768;
  Background background = Background::Noise;
  Rgb background_color{90, 90, 90};
  /// Far end of the gradient; unused for other backgrounds.
  Rgb background_color_end{160, 160, 160};
  /// Standard deviation per channel of the noise background.
  double noise_sigma = 24.0;
  /// Per-channel noise added to every pixel last, sign included.
  double sensor_noise = 2.0;

  /// Four corners of the sign, clockwise from top-left.
  Polygon sign;
  Rgb sign_color{235, 235, 235};

  /// Blank border between the glyphs and the sign's inscribed rectangle.
  double text_margin = 52.0;
  int glyph_count = 5;
  int stroke_min = 4;
  int stroke_max = 9;
  /// Requested RGB distance between sign fill and glyph color.
  double contrast = 200.0;

  std::uint64_t seed = 1;
};

struct GroundTruth {
  std::string file;
  std::uint64_t seed = 0;
  bool has_text = true;
  Background background = Background::Noise;
  double contrast = 0.0;
  Polygon sign;
  Rgb sign_color;
  Rgb glyph_color;
  int glyph_count = 0;
};

/// Throws InputError when the sign leaves the image, is not a convex quad,
/// or leaves no room for glyphs with a one-stroke margin.
void validate(const SynthSpec& spec);

/// Color at `contrast` from `sign` (rounded to 8 bits). A random in-gamut
/// direction is tried first; when none reaches that far the direction to the
/// farthest RGB cube corner is used, capped at that corner.
Rgb pick_glyph_color(Rgb sign, double contrast, Rng& rng);

/// Glyph area: the sign's inscribed axis-aligned rectangle shrunk by
/// text_margin (at least stroke_max). Returned as {x0, y0, x1, y1}.
std::array<double, 4> text_box(const SynthSpec& spec);

/// Width over height of one glyph cell that the layout aims for.
inline constexpr double kGlyphAspect = 0.7;

/// Number of text lines (1 to 3) whose cells come closest to kGlyphAspect.
int glyph_lines(int glyph_count, double box_w, double box_h);

/// Deterministic in the spec (including its seed).
std::pair<Image, GroundTruth> generate(const SynthSpec& spec);

struct SynthOptions {
  int width = 1024;
  int height = 768;
  Background background = Background::Noise;
  double contrast = 200.0;
};

/// Layout used by random_spec, as fractions of the image's shorter side.
inline constexpr double kTextMarginFraction = 0.068;
inline constexpr double kGlyphHeightFraction = 0.11;

/// Random sign placement and colors for one image. Text fills the sign's
/// glyph area in 1 to 3 lines of glyphs about kGlyphHeightFraction tall.
/// Negatives get no glyphs.
SynthSpec random_spec(std::uint64_t seed, const SynthOptions& options, bool negative);

struct CorpusOptions {
  int count = 10;
  int negatives = 0;
  std::uint64_t seed = 1;
  SynthOptions synth;
};

/// Per-image seed, independent of how many images the corpus holds.
std::uint64_t image_seed(std::uint64_t corpus_seed, bool negative, int index);
std::string image_name(std::uint64_t corpus_seed, bool negative, int index);

/// Writes PNGs and manifest.json into `dir` (created if needed).
std::vector<GroundTruth> write_corpus(const CorpusOptions& options, const std::filesystem::path& dir);

std::vector<GroundTruth> read_manifest(const std::filesystem::path& manifest);

struct ImageEval {
  std::string file;
  bool has_text = true;
  bool matched = false;
  double best_iou = 0.0;
  int false_positives = 0;
  int detections = 0;
};

struct EvalReport {
  /// Matched text images over all text images; 0 when there are none.
  double recall = 0.0;
  /// Images with at least one false positive over all images.
  double fp_image_rate = 0.0;
  int positives = 0;
  int negatives = 0;
  /// Sorted by file name.
  std::vector<ImageEval> per_image;
};

inline constexpr double kMatchIou = 0.5;
inline constexpr double kFalsePositiveIou = 0.1;

/// A text image is matched when some hull reaches kMatchIou against the sign;
/// hulls under kFalsePositiveIou are false positives. On images without text
/// every detection is a false positive. Results pair with truths by file stem;
/// orphans on either side raise InputError naming them.
EvalReport evaluate(std::span<const std::pair<std::string, DetectionResult>> results,
                    std::span<const GroundTruth> truths);

std::string to_json(const EvalReport& report);

}  // namespace textarea::synth
