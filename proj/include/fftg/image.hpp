#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fftg/error.hpp"

namespace fftg {

struct Size {
  int width = 0;
  int height = 0;

  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  friend bool operator==(const Size&, const Size&) = default;
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive

  bool empty() const { return x1 < x0 || y1 < y0; }
  int width() const { return empty() ? 0 : x1 - x0 + 1; }
  int height() const { return empty() ? 0 : y1 - y0 + 1; }
};

// Interleaved 8-bit RGB, row-major.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, std::uint8_t fill = 0);
  RgbImage(int width, int height, std::vector<std::uint8_t> data);

  static RgbImage filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }
  bool empty() const { return data_.empty(); }

  std::uint8_t* pixel(int x, int y) { return &data_[index(x, y)]; }
  const std::uint8_t* pixel(int x, int y) const { return &data_[index(x, y)]; }
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::span<std::uint8_t> data() { return data_; }
  std::span<const std::uint8_t> data() const { return data_; }

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(size_.width) + static_cast<std::size_t>(x)) * 3;
  }

  Size size_;
  std::vector<std::uint8_t> data_;
};

// Single-channel real-valued plane, natural range [0,255]. Also used for
// intermediate filter responses, which may leave that range.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);
  GrayImage(int width, int height, std::vector<double> data);

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }

  double& at(int x, int y) { return data_[static_cast<std::size_t>(y) * size_.width + x]; }
  double at(int x, int y) const { return data_[static_cast<std::size_t>(y) * size_.width + x]; }
  // Replicate padding: out-of-frame coordinates clamp to the nearest edge.
  double clamped(int x, int y) const;

  std::span<double> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * size_.width, static_cast<std::size_t>(size_.width)}; }
  std::span<const double> row(int y) const { return {data_.data() + static_cast<std::size_t>(y) * size_.width, static_cast<std::size_t>(size_.width)}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  Size size_;
  std::vector<double> data_;
};

// Interleaved (L, a, b), 8-bit scaled: L in [0,255], a and b offset by 128.
class LabImage {
 public:
  LabImage() = default;
  LabImage(int width, int height);

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }

  double* pixel(int x, int y) { return &data_[(static_cast<std::size_t>(y) * size_.width + x) * 3]; }
  const double* pixel(int x, int y) const { return &data_[(static_cast<std::size_t>(y) * size_.width + x) * 3]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  Size size_;
  std::vector<double> data_;
};

// Boolean membership over a frame. Set algebra requires matching frames.
class PixelSet {
 public:
  PixelSet() = default;
  PixelSet(int width, int height, bool fill = false);

  static PixelSet full(int width, int height) { return PixelSet(width, height, true); }
  static PixelSet rect(int width, int height, int x0, int y0, int x1, int y1);

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < size_.width && y < size_.height && bits_[index(x, y)] != 0;
  }
  bool test(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool on = true) { bits_[index(x, y)] = on ? 1 : 0; }

  std::size_t count() const;
  bool none() const { return count() == 0; }
  BoundingBox bounds() const;

  // One byte per pixel, 0 or 1.
  std::span<const std::uint8_t> bytes() const { return bits_; }

  PixelSet operator|(const PixelSet& other) const;
  PixelSet operator&(const PixelSet& other) const;
  PixelSet operator-(const PixelSet& other) const;
  PixelSet operator~() const;

  friend bool operator==(const PixelSet&, const PixelSet&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * size_.width + x; }
  void require_same_frame(const PixelSet& other) const;

  Size size_;
  std::vector<std::uint8_t> bits_;
};

void require_same_size(Size a, Size b, const char* what);

}  // namespace fftg
