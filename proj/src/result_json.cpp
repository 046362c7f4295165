#include "textarea/result_json.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>

namespace textarea {

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  return s == "-0.0000" ? "0.0000" : s;
}

std::string coordinate(double v) {
  if (v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  return fixed4(v);
}

std::string color_array(const ColorVec& c) {
  return "[" + fixed4(c.r) + ", " + fixed4(c.g) + ", " + fixed4(c.b) + "]";
}

ColorVec color_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) throw InputError("color must be an array of three numbers");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

}  // namespace

std::string config_to_json(const Config& cfg, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  std::string out = "{\n";
  out += pad + "\"min_block_size\": " + std::to_string(cfg.min_block_size) + ",\n";
  out += pad + "\"color_merge_threshold\": " + fixed4(cfg.color_merge_threshold) + ",\n";
  out += pad + "\"peak_separation_threshold\": " + fixed4(cfg.peak_separation_threshold) + ",\n";
  out += pad + "\"text_contrast_threshold\": " + fixed4(cfg.text_contrast_threshold) + ",\n";
  out += pad + "\"solidity_threshold\": " + fixed4(cfg.solidity_threshold) + ",\n";
  out += pad + "\"min_text_fraction\": " + fixed4(cfg.min_text_fraction) + ",\n";
  out += pad + "\"stop_at_first_detection\": " + (cfg.stop_at_first_detection ? "true" : "false") + ",\n";
  out += pad + "\"selection_rule\": \"" + cfg.selection_rule.to_string() + "\"\n";
  out += close + "}";
  return out;
}

std::string to_json(const DetectionResult& result) {
  std::string out = "{\n";
  out += "  \"image\": {\"width\": " + std::to_string(result.width) + ", \"height\": " +
         std::to_string(result.height) + "},\n";
  out += "  \"config\": " + config_to_json(result.config, 2) + ",\n";
  out += "  \"scales_visited\": [";
  for (std::size_t i = 0; i < result.scales_visited.size(); ++i)
    out += (i ? ", " : "") + std::to_string(result.scales_visited[i]);
  out += "],\n";
  out += "  \"detections\": [";
  for (std::size_t i = 0; i < result.detections.size(); ++i) {
    const Detection& d = result.detections[i];
    out += i ? ",\n" : "\n";
    out += "    {\n";
    out += "      \"scale\": " + std::to_string(d.scale) + ",\n";
    out += "      \"hull\": [";
    for (std::size_t v = 0; v < d.hull.size(); ++v)
      out += (v ? ", [" : "[") + coordinate(d.hull[v].x) + ", " + coordinate(d.hull[v].y) + "]";
    out += "],\n";
    out += "      \"bg_color\": " + color_array(d.bg_color) + ",\n";
    out += "      \"fg_color\": " + color_array(d.fg_color) + ",\n";
    out += "      \"contrast\": " + fixed4(d.contrast) + ",\n";
    out += "      \"text_fraction\": " + fixed4(d.text_fraction) + "\n";
    out += "    }";
  }
  out += result.detections.empty() ? "]\n" : "\n  ]\n";
  out += "}\n";
  return out;
}

DetectionResult parse_result_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("result JSON does not parse: ") + e.what());
  }
  try {
    DetectionResult r;
    r.width = doc.at("image").at("width").get<int>();
    r.height = doc.at("image").at("height").get<int>();
    const auto& c = doc.at("config");
    r.config.min_block_size = c.at("min_block_size").get<int>();
    r.config.color_merge_threshold = c.at("color_merge_threshold").get<double>();
    r.config.peak_separation_threshold = c.at("peak_separation_threshold").get<double>();
    r.config.text_contrast_threshold = c.at("text_contrast_threshold").get<double>();
    r.config.solidity_threshold = c.at("solidity_threshold").get<double>();
    r.config.min_text_fraction = c.at("min_text_fraction").get<double>();
    r.config.stop_at_first_detection = c.at("stop_at_first_detection").get<bool>();
    r.config.selection_rule = SelectionRule::parse(c.at("selection_rule").get<std::string>());
    r.scales_visited = doc.at("scales_visited").get<std::vector<int>>();
    for (const auto& d : doc.at("detections")) {
      Detection det;
      det.scale = d.at("scale").get<int>();
      for (const auto& v : d.at("hull")) {
        if (!v.is_array() || v.size() != 2) throw InputError("hull vertex must be an [x, y] pair");
        det.hull.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
      }
      det.bg_color = color_from(d.at("bg_color"));
      det.fg_color = color_from(d.at("fg_color"));
      det.contrast = d.at("contrast").get<double>();
      det.text_fraction = d.at("text_fraction").get<double>();
      r.detections.push_back(std::move(det));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("result JSON is missing or mistypes a field: ") + e.what());
  }
}

}  // namespace textarea
