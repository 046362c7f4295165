#include "textarea/synthbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <set>

#include "textarea/image_io.hpp"

namespace textarea::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint8_t clamp_channel(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double segment_distance(double px, double py, const Point& a, const Point& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((px - a.x) * dx + (py - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (a.x + t * dx), py - (a.y + t * dy));
}

void draw_stroke(Image& img, const Point& a, const Point& b, double thickness, Rgb color) {
  const double r = thickness / 2.0;
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - r)));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - r)));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + r)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (segment_distance(x + 0.5, y + 0.5, a, b) <= r) img.at(x, y) = color;
}

nlohmann::ordered_json rgb_json(Rgb c) { return nlohmann::ordered_json::array({c.r, c.g, c.b}); }

Rgb rgb_from(const nlohmann::json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

std::string stem_of(const std::string& name) { return std::filesystem::path(name).stem().string(); }

}  // namespace

const char* to_string(Background b) {
  switch (b) {
    case Background::Flat: return "flat";
    case Background::Gradient: return "gradient";
    case Background::Noise: return "noise";
  }
  return "?";
}

Background parse_background(const std::string& text) {
  if (text == "flat") return Background::Flat;
  if (text == "gradient") return Background::Gradient;
  if (text == "noise") return Background::Noise;
  throw InputError("background must be flat, gradient or noise, got '" + text + "'");
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

double Rng::uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

int Rng::range(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  // Box-Muller; 1 - u keeps the logarithm finite.
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::array<double, 4> text_box(const SynthSpec& spec) {
  if (spec.sign.size() != 4) throw InputError("sign must have four corners");
  const auto& s = spec.sign;  // tl, tr, br, bl
  const double left = std::max(s[0].x, s[3].x);
  const double right = std::min(s[1].x, s[2].x);
  const double top = std::max(s[0].y, s[1].y);
  const double bottom = std::min(s[2].y, s[3].y);
  const double margin = std::max(double(spec.stroke_max), spec.text_margin);
  return {left + margin, top + margin, right - margin, bottom - margin};
}

void validate(const SynthSpec& spec) {
  if (spec.width < 16 || spec.height < 16) throw InputError("synthetic image must be at least 16x16");
  if (spec.sign.size() != 4) throw InputError("sign must have four corners");
  for (const auto& p : spec.sign)
    if (p.x < 0 || p.y < 0 || p.x > spec.width || p.y > spec.height)
      throw InputError("sign corner lies outside the image");
  for (int i = 0; i < 4; ++i)
    if (cross(spec.sign[i], spec.sign[(i + 1) % 4], spec.sign[(i + 2) % 4]) <= 0.0)
      throw InputError("sign must be a convex quad listed clockwise from top-left");
  if (spec.glyph_count < 0) throw InputError("glyph count must be non-negative");
  if (spec.stroke_min < 1 || spec.stroke_max < spec.stroke_min) throw InputError("invalid stroke thickness range");
  if (!(spec.contrast >= 0.0) || !(spec.noise_sigma >= 0.0) || !(spec.sensor_noise >= 0.0))
    throw InputError("contrast and noise levels must be non-negative");
  if (!(spec.text_margin >= 0.0) || !std::isfinite(spec.text_margin)) throw InputError("text margin must be non-negative");
  const auto box = text_box(spec);
  if (spec.glyph_count > 0 && (box[2] - box[0] < 2.0 * spec.stroke_max || box[3] - box[1] < 2.0 * spec.stroke_max))
    throw InputError("sign leaves no room for glyphs inside its text margin");
}

Rgb pick_glyph_color(Rgb sign, double contrast, Rng& rng) {
  const double s[3] = {double(sign.r), double(sign.g), double(sign.b)};
  for (int attempt = 0; attempt < 64; ++attempt) {
    double u[3] = {rng.normal(), rng.normal(), rng.normal()};
    const double len = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    if (len == 0.0) continue;
    double reach = INFINITY;
    for (int c = 0; c < 3; ++c) {
      u[c] /= len;
      if (u[c] > 0.0) reach = std::min(reach, (255.0 - s[c]) / u[c]);
      if (u[c] < 0.0) reach = std::min(reach, s[c] / -u[c]);
    }
    if (reach >= contrast)
      return {clamp_channel(s[0] + contrast * u[0]), clamp_channel(s[1] + contrast * u[1]),
              clamp_channel(s[2] + contrast * u[2])};
  }
  double corner[3], dist2 = 0.0;
  for (int c = 0; c < 3; ++c) {
    corner[c] = s[c] < 127.5 ? 255.0 : 0.0;
    dist2 += (corner[c] - s[c]) * (corner[c] - s[c]);
  }
  const double dist = std::sqrt(dist2);
  const double t = dist > 0.0 ? std::min(contrast, dist) / dist : 0.0;
  return {clamp_channel(s[0] + t * (corner[0] - s[0])), clamp_channel(s[1] + t * (corner[1] - s[1])),
          clamp_channel(s[2] + t * (corner[2] - s[2]))};
}

int glyph_lines(int glyph_count, double box_w, double box_h) {
  int best = 1;
  double best_err = INFINITY;
  for (int lines = 1; lines <= std::min(3, std::max(1, glyph_count)); ++lines) {
    const int per_line = (glyph_count + lines - 1) / lines;
    const double aspect = (box_w / per_line) / (box_h / lines);
    const double err = std::abs(std::log(aspect / kGlyphAspect));
    if (err < best_err) {
      best_err = err;
      best = lines;
    }
  }
  return best;
}

std::pair<Image, GroundTruth> generate(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed ^ 0x5ca1ab1e0ddba11ull);
  Image img(spec.width, spec.height);

  const double span = double(spec.width + spec.height);
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const Rgb& a = spec.background_color;
      Rgb& p = img.at(x, y);
      switch (spec.background) {
        case Background::Flat: p = a; break;
        case Background::Gradient: {
          const Rgb& b = spec.background_color_end;
          const double t = (x + y) / span;
          p = {clamp_channel(a.r + t * (b.r - a.r)), clamp_channel(a.g + t * (b.g - a.g)),
               clamp_channel(a.b + t * (b.b - a.b))};
          break;
        }
        case Background::Noise:
          p = {clamp_channel(a.r + spec.noise_sigma * rng.normal()), clamp_channel(a.g + spec.noise_sigma * rng.normal()),
               clamp_channel(a.b + spec.noise_sigma * rng.normal())};
          break;
      }
    }
  }

  double sx0 = spec.width, sy0 = spec.height, sx1 = 0.0, sy1 = 0.0;
  for (const auto& p : spec.sign) {
    sx0 = std::min(sx0, p.x);
    sy0 = std::min(sy0, p.y);
    sx1 = std::max(sx1, p.x);
    sy1 = std::max(sy1, p.y);
  }
  for (int y = static_cast<int>(sy0); y < std::min(spec.height, static_cast<int>(std::ceil(sy1))); ++y)
    for (int x = static_cast<int>(sx0); x < std::min(spec.width, static_cast<int>(std::ceil(sx1))); ++x)
      if (polygon_contains(spec.sign, {x + 0.5, y + 0.5})) img.at(x, y) = spec.sign_color;

  const Rgb glyph = pick_glyph_color(spec.sign_color, spec.contrast, rng);
  if (spec.glyph_count > 0) {
    const auto box = text_box(spec);
    const double bw = box[2] - box[0], bh = box[3] - box[1];
    const int lines = glyph_lines(spec.glyph_count, bw, bh);
    const int per_line = (spec.glyph_count + lines - 1) / lines;
    const double cell_w = bw / per_line, cell_h = bh / lines;
    for (int g = 0; g < spec.glyph_count; ++g) {
      const double thickness = rng.range(spec.stroke_min, spec.stroke_max);
      const double half = thickness / 2.0;
      const double cx0 = box[0] + (g % per_line) * cell_w, cy0 = box[1] + (g / per_line) * cell_h;
      // Stroke centres stay half a stroke inside the cell, plus a gap between neighbours.
      const double pad_x = std::min(0.08 * cell_w, std::max(0.0, cell_w / 2 - half - 1));
      const double pad_y = std::min(0.08 * cell_h, std::max(0.0, cell_h / 2 - half - 1));
      const double lx = cx0 + pad_x + half, rx = cx0 + cell_w - pad_x - half;
      const double ty = cy0 + pad_y + half, by = cy0 + cell_h - pad_y - half;
      // Strokes join points of a 3x3 lattice over the cell. A stem spans the
      // height on one side and a second stroke crosses the full width.
      auto lattice = [&](int i, int j) { return Point{lx + (rx - lx) * i / 2.0, ty + (by - ty) * j / 2.0}; };
      const int stem = 2 * rng.range(0, 1);
      draw_stroke(img, lattice(stem, 0), lattice(stem, 2), thickness, glyph);
      draw_stroke(img, lattice(2 - stem, rng.range(0, 2)), lattice(stem, rng.range(0, 2)), thickness, glyph);
      const int strokes = rng.range(2, 4);
      for (int i = 0; i < strokes; ++i) {
        const int a = rng.range(0, 8);
        int b = rng.range(0, 7);
        if (b >= a) ++b;
        draw_stroke(img, lattice(a % 3, a / 3), lattice(b % 3, b / 3), thickness, glyph);
      }
    }
  }

  if (spec.sensor_noise > 0.0) {
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        Rgb& p = img.at(x, y);
        p = {clamp_channel(p.r + spec.sensor_noise * rng.normal()), clamp_channel(p.g + spec.sensor_noise * rng.normal()),
             clamp_channel(p.b + spec.sensor_noise * rng.normal())};
      }
    }
  }

  GroundTruth truth;
  truth.seed = spec.seed;
  truth.has_text = spec.glyph_count > 0;
  truth.background = spec.background;
  truth.contrast = spec.contrast;
  truth.sign = spec.sign;
  truth.sign_color = spec.sign_color;
  truth.glyph_color = glyph;
  truth.glyph_count = spec.glyph_count;
  return {std::move(img), std::move(truth)};
}

SynthSpec random_spec(std::uint64_t seed, const SynthOptions& options, bool negative) {
  Rng rng(seed);
  SynthSpec spec;
  spec.width = options.width;
  spec.height = options.height;
  spec.background = options.background;
  spec.contrast = options.contrast;
  spec.seed = seed;

  const int w = static_cast<int>(std::lround(rng.uniform(0.35, 0.6) * spec.width));
  const int h = static_cast<int>(std::lround(rng.uniform(0.3, 0.5) * spec.height));
  const int border = std::max(1, std::min(spec.width, spec.height) / 48);
  const int x = rng.range(border, std::max(border, spec.width - border - w));
  const int y = rng.range(border, std::max(border, spec.height - border - h));
  const double jitter = 0.01 * std::min(w, h);
  auto corner = [&](double cx, double cy) {
    return Point{std::clamp(std::round(cx + rng.uniform(-jitter, jitter)), 0.0, double(spec.width)),
                 std::clamp(std::round(cy + rng.uniform(-jitter, jitter)), 0.0, double(spec.height))};
  };
  spec.sign = {corner(x, y), corner(x + w, y), corner(x + w, y + h), corner(x, y + h)};

  auto random_color = [&] {
    return Rgb{static_cast<std::uint8_t>(rng.range(0, 255)), static_cast<std::uint8_t>(rng.range(0, 255)),
               static_cast<std::uint8_t>(rng.range(0, 255))};
  };
  spec.sign_color = random_color();
  spec.background_color = random_color();
  for (int i = 0; i < 100 && color_distance(to_color(spec.background_color), to_color(spec.sign_color)) < 100.0; ++i)
    spec.background_color = random_color();
  spec.background_color_end = random_color();

  spec.text_margin = std::round(kTextMarginFraction * std::min(spec.width, spec.height));
  spec.glyph_count = 0;
  if (!negative) {
    const auto box = text_box(spec);
    const double glyph_h = kGlyphHeightFraction * std::min(spec.width, spec.height);
    const int lines = std::clamp(static_cast<int>(std::lround((box[3] - box[1]) / glyph_h)), 1, 3);
    const double cell_h = (box[3] - box[1]) / lines;
    spec.glyph_count = lines * std::max(2, static_cast<int>(std::lround((box[2] - box[0]) / (kGlyphAspect * cell_h))));
  }
  return spec;
}

std::uint64_t image_seed(std::uint64_t corpus_seed, bool negative, int index) {
  return splitmix64(splitmix64(corpus_seed) ^ (negative ? 0xa5a5a5a5ull << 32 : 0) ^ static_cast<std::uint64_t>(index));
}

std::string image_name(std::uint64_t corpus_seed, bool negative, int index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "s%llu-%s%04d.png", static_cast<unsigned long long>(corpus_seed),
                negative ? "neg" : "pos", index);
  return buf;
}

std::vector<GroundTruth> write_corpus(const CorpusOptions& options, const std::filesystem::path& dir) {
  if (options.count < 0 || options.negatives < 0) throw InputError("image counts must be non-negative");
  std::filesystem::create_directories(dir);
  std::vector<GroundTruth> truths;
  auto emit = [&](bool negative, int index) {
    const auto [img, truth] = generate(random_spec(image_seed(options.seed, negative, index), options.synth, negative));
    GroundTruth t = truth;
    t.file = image_name(options.seed, negative, index);
    io::write_png(dir / t.file, img);
    truths.push_back(std::move(t));
  };
  for (int i = 0; i < options.count; ++i) emit(false, i);
  for (int i = 0; i < options.negatives; ++i) emit(true, i);

  nlohmann::ordered_json doc;
  doc["seed"] = options.seed;
  doc["count"] = options.count;
  doc["negatives"] = options.negatives;
  doc["width"] = options.synth.width;
  doc["height"] = options.synth.height;
  doc["background"] = to_string(options.synth.background);
  doc["contrast"] = options.synth.contrast;
  doc["images"] = nlohmann::ordered_json::array();
  for (const auto& t : truths) {
    nlohmann::ordered_json e;
    e["file"] = t.file;
    e["seed"] = t.seed;
    e["has_text"] = t.has_text;
    e["background"] = to_string(t.background);
    e["contrast"] = t.contrast;
    e["sign_polygon"] = nlohmann::ordered_json::array();
    for (const auto& p : t.sign) e["sign_polygon"].push_back({p.x, p.y});
    e["sign_color"] = rgb_json(t.sign_color);
    e["glyph_color"] = rgb_json(t.glyph_color);
    e["glyph_count"] = t.glyph_count;
    doc["images"].push_back(std::move(e));
  }
  std::ofstream out(dir / "manifest.json");
  out << doc.dump(2) << '\n';
  if (!out) throw io::IoError("cannot write manifest in '" + dir.string() + "'");
  return truths;
}

std::vector<GroundTruth> read_manifest(const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw io::IoError("cannot open manifest '" + manifest.string() + "'");
  try {
    const auto doc = nlohmann::json::parse(in);
    std::vector<GroundTruth> out;
    for (const auto& e : doc.at("images")) {
      GroundTruth t;
      t.file = e.at("file").get<std::string>();
      t.seed = e.at("seed").get<std::uint64_t>();
      t.has_text = e.at("has_text").get<bool>();
      t.background = parse_background(e.at("background").get<std::string>());
      t.contrast = e.at("contrast").get<double>();
      for (const auto& p : e.at("sign_polygon")) t.sign.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      t.sign_color = rgb_from(e.at("sign_color"));
      t.glyph_color = rgb_from(e.at("glyph_color"));
      t.glyph_count = e.at("glyph_count").get<int>();
      out.push_back(std::move(t));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed manifest '" + manifest.string() + "': " + e.what());
  }
}

EvalReport evaluate(std::span<const std::pair<std::string, DetectionResult>> results,
                    std::span<const GroundTruth> truths) {
  std::map<std::string, const GroundTruth*> by_stem;
  for (const auto& t : truths)
    if (!by_stem.emplace(stem_of(t.file), &t).second) throw InputError("duplicate truth entry '" + t.file + "'");
  std::map<std::string, const DetectionResult*> result_by_stem;
  for (const auto& [name, r] : results)
    if (!result_by_stem.emplace(stem_of(name), &r).second) throw InputError("duplicate result for '" + name + "'");

  std::string orphans;
  for (const auto& [stem, t] : by_stem)
    if (!result_by_stem.contains(stem)) orphans += " " + t->file + " (no result)";
  for (const auto& [stem, r] : result_by_stem)
    if (!by_stem.contains(stem)) orphans += " " + stem + " (no truth)";
  if (!orphans.empty()) throw InputError("unpaired files:" + orphans);

  EvalReport report;
  int matched = 0, with_fp = 0;
  for (const auto& [stem, truth] : by_stem) {
    const DetectionResult& r = *result_by_stem.at(stem);
    ImageEval e;
    e.file = truth->file;
    e.has_text = truth->has_text;
    e.detections = static_cast<int>(r.detections.size());
    for (const auto& d : r.detections) {
      const double iou = polygon_iou(d.hull, truth->sign);
      e.best_iou = std::max(e.best_iou, iou);
      if (!truth->has_text || iou < kFalsePositiveIou) ++e.false_positives;
    }
    e.matched = truth->has_text && e.best_iou >= kMatchIou;
    (truth->has_text ? report.positives : report.negatives)++;
    matched += e.matched;
    with_fp += e.false_positives > 0;
    report.per_image.push_back(std::move(e));
  }
  report.recall = report.positives ? double(matched) / report.positives : 0.0;
  const int total = report.positives + report.negatives;
  report.fp_image_rate = total ? double(with_fp) / total : 0.0;
  return report;
}

std::string to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  doc["recall"] = round4(report.recall);
  doc["fp_image_rate"] = round4(report.fp_image_rate);
  doc["positives"] = report.positives;
  doc["negatives"] = report.negatives;
  doc["per_image"] = nlohmann::ordered_json::array();
  for (const auto& e : report.per_image) {
    nlohmann::ordered_json j;
    j["file"] = e.file;
    j["has_text"] = e.has_text;
    j["matched"] = e.matched;
    j["best_iou"] = round4(e.best_iou);
    j["false_positives"] = e.false_positives;
    j["detections"] = e.detections;
    doc["per_image"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace textarea::synth
