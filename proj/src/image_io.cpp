#include "textarea/image_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <istream>
#include <string>

namespace textarea::io {

namespace {

std::string describe(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + describe(path) + " for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + describe(path));
}

// Netpbm header token, skipping whitespace and '#' comments.
int read_pnm_number(std::istream& in) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) throw IoError("malformed PPM header");
  long value = 0;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    if (value > 1'000'000) throw IoError("PPM header value out of range");
    c = in.get();
  }
  // Exactly one whitespace character separates the header from the raster.
  if (c != EOF && !std::isspace(c)) throw IoError("malformed PPM header");
  return static_cast<int>(value);
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path));
  unsigned char magic[8] = {};
  in.read(reinterpret_cast<char*>(magic), sizeof magic);
  const auto got = in.gcount();
  if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) return read_png(path);
  if (got >= 2 && magic[0] == 'P' && magic[1] == '6') return read_ppm(path);
  throw IoError(describe(path) + " is neither PNG nor binary PPM");
}

Image read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  const std::string name = path.string();
  if (!png_image_begin_read_from_file(&image, name.c_str()))
    throw IoError("cannot decode PNG " + describe(path) + ": " + image.message);

  image.format = PNG_FORMAT_RGBA;
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + describe(path) + ": " + msg);
  }

  std::vector<Rgb> pixels(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const png_byte* p = &buffer[i * 4];
    const unsigned a = p[3];
    auto over_white = [a](unsigned c) {
      return static_cast<std::uint8_t>((c * a + 255u * (255u - a) + 127u) / 255u);
    };
    pixels[i] = {over_white(p[0]), over_white(p[1]), over_white(p[2])};
  }
  return Image(width, height, std::move(pixels));
}

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + describe(path));
  char magic[2] = {};
  in.read(magic, 2);
  if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '6')
    throw IoError(describe(path) + " is not a binary PPM (P6)");
  const int width = read_pnm_number(in);
  const int height = read_pnm_number(in);
  const int maxval = read_pnm_number(in);
  if (width < 1 || height < 1) throw IoError("PPM " + describe(path) + " has empty dimensions");
  if (maxval < 1 || maxval > 65535) throw IoError("PPM " + describe(path) + " has invalid maxval");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(count * 3 * bytes_per_sample);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw IoError("PPM " + describe(path) + " is truncated");

  auto sample = [&](std::size_t i) -> std::uint8_t {
    unsigned v = bytes_per_sample == 2 ? (unsigned(raw[2 * i]) << 8) | raw[2 * i + 1] : raw[i];
    if (v > unsigned(maxval)) v = maxval;
    return static_cast<std::uint8_t>((v * 255u + unsigned(maxval) / 2) / unsigned(maxval));
  };
  std::vector<Rgb> pixels(count);
  for (std::size_t i = 0; i < count; ++i)
    pixels[i] = {sample(3 * i), sample(3 * i + 1), sample(3 * i + 2)};
  return Image(width, height, std::move(pixels));
}

void write_png(const std::filesystem::path& path, const Image& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  static_assert(sizeof(Rgb) == 3);
  const std::string name = path.string();
  if (!png_image_write_to_file(&image, name.c_str(), 0, img.pixels().data(), 0, nullptr))
    throw IoError("cannot write PNG " + describe(path) + ": " + image.message);
}

void write_ppm(const std::filesystem::path& path, const Image& img) {
  auto out = open_out(path);
  out << "P6\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()),
            static_cast<std::streamsize>(img.pixels().size() * 3));
  finish_write(out, path);
}

void write_pgm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> values) {
  if (values.size() != static_cast<std::size_t>(width) * height)
    throw InputError("PGM value count does not match dimensions");
  auto out = open_out(path);
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size()));
  finish_write(out, path);
}

void write_pbm(const std::filesystem::path& path, int width, int height,
               std::span<const std::uint8_t> bits) {
  if (bits.size() != static_cast<std::size_t>(width) * height)
    throw InputError("PBM bit count does not match dimensions");
  auto out = open_out(path);
  out << "P4\n" << width << ' ' << height << "\n";
  const std::size_t stride = (static_cast<std::size_t>(width) + 7) / 8;
  std::vector<unsigned char> row(stride);
  for (int y = 0; y < height; ++y) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 0; x < width; ++x)
      if (bits[static_cast<std::size_t>(y) * width + x]) row[x / 8] |= static_cast<unsigned char>(0x80u >> (x % 8));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(stride));
  }
  finish_write(out, path);
}

void write_indexed_png(const std::filesystem::path& path, int width, int height,
                       std::span<const std::uint8_t> labels, std::span<const Rgb> palette) {
  if (labels.size() != static_cast<std::size_t>(width) * height)
    throw InputError("label count does not match dimensions");
  if (palette.empty() || palette.size() > 256) throw InputError("palette must have 1..256 entries");
  for (auto l : labels)
    if (l >= palette.size()) throw InputError("label outside palette");
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_RGB_COLORMAP;
  image.colormap_entries = static_cast<png_uint_32>(palette.size());
  const std::string name = path.string();
  if (!png_image_write_to_file(&image, name.c_str(), 0, labels.data(), 0, palette.data()))
    throw IoError("cannot write PNG " + describe(path) + ": " + image.message);
}

}  // namespace textarea::io
