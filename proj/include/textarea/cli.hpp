#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "textarea/core.hpp"
#include "textarea/pipeline.hpp"

namespace textarea::cli {

enum ExitCode : int { kOk = 0, kInternalError = 1, kInputError = 2 };

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Data goes to `out`, diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// Copy of `img` with every detection hull outlined three pixels wide:
/// pixels whose centre lies within one pixel of a hull edge, with vertices
/// taken as pixel indices clamped into the image.
Image render_overlay(const Image& img, const DetectionResult& result, Rgb color = {255, 0, 0});

}  // namespace textarea::cli
