#pragma once

#include <png.h>

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "fieldsynth/errors.hpp"
#include "fieldsynth/raster.hpp"

namespace fieldsynth {

namespace detail {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline void png_error_handler(png_structp png, png_const_charp msg) {
  auto* what = static_cast<std::string*>(png_get_error_ptr(png));
  if (what) *what = msg;
  png_longjmp(png, 1);
}

inline void png_warning_handler(png_structp, png_const_charp) {}

/// Low compression level: these files are dominated by noise, and encode
/// time matters more than size.
inline void write_png(const std::string& path, int width, int height, int color_type, int channels,
                      const std::uint8_t* data) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError(path, "cannot open for writing");
  std::string what;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &what, png_error_handler, png_warning_handler);
  if (!png) throw IoError(path, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError(path, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError(path, "png write failed: " + what);
  }
  png_init_io(png, file.get());
  png_set_compression_level(png, 1);
  png_set_filter(png, 0, PNG_FILTER_SUB);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) png_write_row(png, data + stride * y);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError(path, "flush failed");
}

struct RawPng {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

inline RawPng read_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError(path, "cannot open for reading");
  std::string what;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &what, png_error_handler, png_warning_handler);
  if (!png) throw IoError(path, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError(path, "png_create_info_struct failed");
  }
  RawPng out;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path, "png read failed: " + what);
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  png_set_strip_16(png);
  png_set_packing(png);
  const int color = png_get_color_type(png, info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);
  out.width = static_cast<int>(png_get_image_width(png, info));
  out.height = static_cast<int>(png_get_image_height(png, info));
  out.channels = png_get_channels(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out.data.resize(stride * out.height);
  rows.resize(out.height);
  for (int y = 0; y < out.height; ++y) rows[y] = out.data.data() + stride * y;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

}  // namespace detail

inline void write_png(const std::string& path, const Image& img) {
  detail::write_png(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 3, img.pixels.data());
}

inline void write_png(const std::string& path, const Mask& mask) {
  detail::write_png(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, 1, mask.labels.data());
}

inline Image read_image_png(const std::string& path) {
  auto raw = detail::read_png(path);
  if (raw.channels == 3) {
    Image img;
    img.width = raw.width;
    img.height = raw.height;
    img.pixels = std::move(raw.data);
    return img;
  }
  if (raw.channels == 1) {
    Image img(raw.width, raw.height);
    for (std::size_t i = 0; i < raw.data.size(); ++i) img.pixels[i * 3] = img.pixels[i * 3 + 1] = img.pixels[i * 3 + 2] = raw.data[i];
    return img;
  }
  throw IoError(path, "unsupported channel count " + std::to_string(raw.channels));
}

inline Mask read_mask_png(const std::string& path) {
  auto raw = detail::read_png(path);
  if (raw.channels != 1) throw IoError(path, "label masks must be single-channel");
  Mask m;
  m.width = raw.width;
  m.height = raw.height;
  m.labels = std::move(raw.data);
  return m;
}

}  // namespace fieldsynth
