#include "fftg/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace fftg::io {
namespace {

std::vector<std::uint8_t> read_pixels(const std::filesystem::path& path, png_uint_32 format, int& width, int& height) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorCode::Io, "cannot read PNG " + path.string() + ": " + image.message);
  }
  image.format = format;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::Io, "cannot decode PNG " + path.string() + ": " + msg);
  }
  width = static_cast<int>(image.width);
  height = static_cast<int>(image.height);
  return pixels;
}

png_image describe(int width, int height, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  return image;
}

void write_pixels(const std::filesystem::path& path, int width, int height, png_uint_32 format, const void* data) {
  png_image image = describe(width, height, format);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!png_image_write_to_file(&image, path.c_str(), 0, data, 0, nullptr)) {
    throw Error(ErrorCode::Io, "cannot write PNG " + path.string() + ": " + image.message);
  }
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
  int w = 0, h = 0;
  auto pixels = read_pixels(path, PNG_FORMAT_RGB, w, h);
  return RgbImage(w, h, std::move(pixels));
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const auto pixels = read_pixels(path, PNG_FORMAT_GRAY, w, h);
  std::vector<double> values(pixels.begin(), pixels.end());
  return GrayImage(w, h, std::move(values));
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  write_pixels(path, img.width(), img.height(), PNG_FORMAT_RGB, img.data().data());
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<std::uint8_t> bytes(img.size().area());
  std::transform(img.data().begin(), img.data().end(), bytes.begin(),
                 [](double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); });
  write_pixels(path, img.width(), img.height(), PNG_FORMAT_GRAY, bytes.data());
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  png_image image = describe(img.width(), img.height(), PNG_FORMAT_RGB);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data().data(), 0, nullptr)) {
    throw Error(ErrorCode::Io, std::string("cannot size PNG: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data().data(), 0, nullptr)) {
    throw Error(ErrorCode::Io, std::string("cannot encode PNG: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace fftg::io
