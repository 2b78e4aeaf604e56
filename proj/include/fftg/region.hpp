#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "fftg/image.hpp"

namespace fftg {

enum class RegionName { Mouth, Nose, Eyes, Face };

inline constexpr std::array<RegionName, 4> kRegionOrder = {RegionName::Mouth, RegionName::Nose, RegionName::Eyes,
                                                           RegionName::Face};

std::string_view to_string(RegionName r);
std::optional<RegionName> parse_region(std::string_view name);

// Per-pixel manipulation intensity in [0,1].
class ForgeryMask {
 public:
  ForgeryMask() = default;
  ForgeryMask(int width, int height, std::vector<double> values);

  int width() const { return size_.width; }
  int height() const { return size_.height; }
  Size size() const { return size_; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * size_.width + x]; }
  std::span<const double> values() const { return values_; }

  double max() const;
  // Pixels with value >= level.
  PixelSet threshold(double level) const;
  // 255*M as a gray plane (PNG export rounds it).
  GrayImage to_gray() const;

 private:
  Size size_;
  std::vector<double> values_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// 68-point landmarks in the common dlib ordering.
struct Landmarks {
  static constexpr std::size_t kCount = 68;
  std::vector<Point> points;

  // {"points": [[x, y], ...]}
  static Landmarks load(const std::filesystem::path& path);
  static Landmarks parse(std::string_view json_text);
  std::string to_json() const;
};

struct RegionMap {
  std::array<PixelSet, 4> sets;  // indexed by RegionName

  const PixelSet& operator[](RegionName r) const { return sets[static_cast<std::size_t>(r)]; }
  PixelSet& operator[](RegionName r) { return sets[static_cast<std::size_t>(r)]; }
};

struct RegionEntry {
  RegionName region;
  double mean;

  friend bool operator==(const RegionEntry&, const RegionEntry&) = default;
};

// Entries with mean > theta, sorted by descending mean (ties keep region order).
using ForgeryRegionList = std::vector<RegionEntry>;

// M = mean over channels of |real - fake| / 255.
ForgeryMask generate_mask(const RgbImage& real, const RgbImage& fake);

// Filled convex hulls of landmark groups: mouth 48-67, nose 27-35, eyes 36-41 and
// 42-47 dilated by eye_dilation, face = hull of all points minus the other three.
// Overlaps resolve in the order mouth, nose, eyes.
RegionMap partition_regions(const Landmarks& lms, int width, int height, int eye_dilation = 4);

// Filled convex hull of a point set, pixel centres on the boundary included.
PixelSet fill_convex_hull(std::span<const Point> pts, int width, int height);

// Mean mask value per region in kRegionOrder; row-major sequential summation.
std::array<double, 4> region_means(const ForgeryMask& mask, const RegionMap& map);

ForgeryRegionList extract_forgery_regions(const ForgeryMask& mask, const RegionMap& map, double theta);

// Uniform seeded pick.
RegionName select_region(const ForgeryRegionList& list, std::uint64_t seed);

}  // namespace fftg
