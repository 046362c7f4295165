#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "textarea/core.hpp"

namespace textarea::io {

/// Unreadable or undecodable file. Distinct from InputError so the CLI can map
/// both to the same exit code while tests can tell them apart.
class IoError : public InputError {
 public:
  using InputError::InputError;
};

/// Reads PNG or binary PPM (P6), picked by file signature. Alpha is composited
/// over white; grayscale and palette images are expanded to RGB; 16-bit
/// samples are reduced to 8 bits.
Image read_image(const std::filesystem::path& path);

Image read_png(const std::filesystem::path& path);
Image read_ppm(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const Image& img);
void write_ppm(const std::filesystem::path& path, const Image& img);

/// 8-bit grayscale (P5).
void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> values);

/// Packed bitmap (P4); nonzero entries are written as black (1).
void write_pbm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> bits);

/// Palette PNG; `labels` indexes into `palette` (at most 256 entries).
void write_indexed_png(const std::filesystem::path& path, int width, int height,
                       std::span<const std::uint8_t> labels, std::span<const Rgb> palette);

}  // namespace textarea::io
