#pragma once

#include <string>
#include <string_view>

#include "textarea/pipeline.hpp"

namespace textarea {

/// Fixed field order, two-space indent, reals with four decimals. Equal
/// results always serialize to identical bytes.
std::string to_json(const DetectionResult& result);

/// Inverse of to_json; throws InputError on malformed documents.
DetectionResult parse_result_json(std::string_view text);

std::string config_to_json(const Config& cfg, int indent = 0);

}  // namespace textarea
