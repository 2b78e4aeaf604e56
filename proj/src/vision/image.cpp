#include "fftg/image.hpp"

#include <algorithm>
#include <string>

namespace fftg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::NoPairs: return "NoPairs";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::EmptyRegionMap: return "EmptyRegionMap";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::RegionTouchesBorder: return "RegionTouchesBorder";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

void require_same_size(Size a, Size b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                    std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

namespace {

void require_valid_size(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "image dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

RgbImage::RgbImage(int width, int height, std::uint8_t fill) : size_{width, height} {
  require_valid_size(width, height);
  data_.assign(size_.area() * 3, fill);
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data) : size_{width, height}, data_(std::move(data)) {
  require_valid_size(width, height);
  if (data_.size() != size_.area() * 3) {
    throw Error(ErrorCode::InvalidArgument, "RGB buffer length does not match dimensions");
  }
}

RgbImage RgbImage::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) img.set(x, y, r, g, b);
  }
  return img;
}

void RgbImage::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  std::uint8_t* p = pixel(x, y);
  p[0] = r;
  p[1] = g;
  p[2] = b;
}

GrayImage::GrayImage(int width, int height, double fill) : size_{width, height} {
  require_valid_size(width, height);
  data_.assign(size_.area(), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<double> data) : size_{width, height}, data_(std::move(data)) {
  require_valid_size(width, height);
  if (data_.size() != size_.area()) {
    throw Error(ErrorCode::InvalidArgument, "gray buffer length does not match dimensions");
  }
}

double GrayImage::clamped(int x, int y) const {
  x = std::clamp(x, 0, size_.width - 1);
  y = std::clamp(y, 0, size_.height - 1);
  return at(x, y);
}

LabImage::LabImage(int width, int height) : size_{width, height} {
  require_valid_size(width, height);
  data_.assign(size_.area() * 3, 0.0);
}

PixelSet::PixelSet(int width, int height, bool fill) : size_{width, height} {
  require_valid_size(width, height);
  bits_.assign(size_.area(), fill ? 1 : 0);
}

PixelSet PixelSet::rect(int width, int height, int x0, int y0, int x1, int y1) {
  PixelSet s(width, height);
  for (int y = std::max(0, y0); y <= std::min(height - 1, y1); ++y) {
    for (int x = std::max(0, x0); x <= std::min(width - 1, x1); ++x) s.set(x, y);
  }
  return s;
}

std::size_t PixelSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BoundingBox PixelSet::bounds() const {
  BoundingBox box{size_.width, size_.height, -1, -1};
  for (int y = 0; y < size_.height; ++y) {
    for (int x = 0; x < size_.width; ++x) {
      if (!test(x, y)) continue;
      box.x0 = std::min(box.x0, x);
      box.y0 = std::min(box.y0, y);
      box.x1 = std::max(box.x1, x);
      box.y1 = std::max(box.y1, y);
    }
  }
  if (box.x1 < 0) return BoundingBox{};
  return box;
}

void PixelSet::require_same_frame(const PixelSet& other) const { require_same_size(size_, other.size_, "pixel set frames"); }

PixelSet PixelSet::operator|(const PixelSet& other) const {
  require_same_frame(other);
  PixelSet out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] | other.bits_[i];
  return out;
}

PixelSet PixelSet::operator&(const PixelSet& other) const {
  require_same_frame(other);
  PixelSet out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & other.bits_[i];
  return out;
}

PixelSet PixelSet::operator-(const PixelSet& other) const {
  require_same_frame(other);
  PixelSet out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] = bits_[i] & static_cast<std::uint8_t>(1 - other.bits_[i]);
  return out;
}

PixelSet PixelSet::operator~() const {
  PixelSet out = *this;
  for (auto& b : out.bits_) b = static_cast<std::uint8_t>(1 - b);
  return out;
}

}  // namespace fftg
