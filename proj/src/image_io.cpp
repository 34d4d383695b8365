#include "quadinterp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

namespace quadinterp {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp png, png_const_charp message) {
  // libpng requires this to not return; jump back into the setjmp frame.
  auto* buffer = static_cast<std::string*>(png_get_error_ptr(png));
  if (buffer) *buffer = message;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

}  // namespace

std::uint8_t quantize_to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

Frame quantize(const Frame& frame) {
  Frame out = frame;
  for (double& v : out.data()) v = quantize_to_byte(v) / 255.0;
  return out;
}

Frame load_frame(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open PNG for reading: " + path.string());

  unsigned char signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    throw FormatError("not a PNG file: " + path.string());
  }

  std::string message;
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (!png) throw Error("libpng: out of memory reading " + path.string());
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng: out of memory reading " + path.string());
  }

  // Everything that can longjmp lives below; no C++ objects with
  // destructors are created between setjmp and the final cleanup.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("corrupt PNG " + path.string() + ": " + message);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);

  int channels = 0;
  if (color_type == PNG_COLOR_TYPE_GRAY) channels = 1;
  if (color_type == PNG_COLOR_TYPE_RGB) channels = 3;
  if (bit_depth != 8 || channels == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("unsupported PNG " + path.string() + " (bit depth " +
                      std::to_string(bit_depth) + ", color type " + std::to_string(color_type) +
                      "); expected 8-bit gray or RGB");
  }

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  pixels.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(pixels.size());
  std::transform(pixels.begin(), pixels.end(), data.begin(),
                 [](png_byte b) { return static_cast<double>(b) / 255.0; });
  return Frame(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

void save_frame(const Frame& frame, const std::filesystem::path& path) {
  if (frame.empty()) throw DimensionError("cannot save an empty frame to " + path.string());

  std::vector<png_byte> pixels(frame.data().size());
  std::transform(frame.data().begin(), frame.data().end(), pixels.begin(), quantize_to_byte);
  const std::size_t stride = static_cast<std::size_t>(frame.width()) * frame.channels();
  std::vector<png_bytep> rows(frame.height());
  for (int y = 0; y < frame.height(); ++y) rows[y] = pixels.data() + y * stride;

  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open PNG for writing: " + path.string());

  std::string message;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_handler, png_warning_handler);
  if (!png) throw Error("libpng: out of memory writing " + path.string());
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng: out of memory writing " + path.string());
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("failed writing PNG " + path.string() + ": " + message);
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, frame.width(), frame.height(), 8,
               frame.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  if (std::fflush(file.get()) != 0) throw IoError("failed flushing PNG " + path.string());
}

}  // namespace quadinterp
