#include "fftg/region.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "fftg/simd.hpp"
#include "fftg/vision.hpp"

namespace fftg {

std::string_view to_string(RegionName r) {
  switch (r) {
    case RegionName::Mouth: return "mouth";
    case RegionName::Nose: return "nose";
    case RegionName::Eyes: return "eyes";
    case RegionName::Face: return "face";
  }
  return "unknown";
}

std::optional<RegionName> parse_region(std::string_view name) {
  for (RegionName r : kRegionOrder) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

ForgeryMask::ForgeryMask(int width, int height, std::vector<double> values) : size_{width, height}, values_(std::move(values)) {
  if (width < 1 || height < 1 || values_.size() != size_.area()) {
    throw Error(ErrorCode::InvalidArgument, "forgery mask size does not match dimensions");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "forgery mask values must lie in [0,1]");
  }
}

double ForgeryMask::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

PixelSet ForgeryMask::threshold(double level) const {
  PixelSet out(size_.width, size_.height);
  for (int y = 0; y < size_.height; ++y) {
    for (int x = 0; x < size_.width; ++x) {
      if (at(x, y) >= level) out.set(x, y);
    }
  }
  return out;
}

GrayImage ForgeryMask::to_gray() const {
  std::vector<double> scaled(values_.size());
  std::transform(values_.begin(), values_.end(), scaled.begin(), [](double v) { return 255.0 * v; });
  return GrayImage(size_.width, size_.height, std::move(scaled));
}

Landmarks Landmarks::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("landmark JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw Error(ErrorCode::InvalidArgument, "landmark JSON needs a \"points\" array");
  }
  Landmarks lms;
  for (const auto& p : doc["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::InvalidArgument, "landmark points must be [x, y] number pairs");
    }
    lms.points.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  if (lms.points.size() != kCount) {
    throw Error(ErrorCode::InvalidArgument, "expected 68 landmarks, got " + std::to_string(lms.points.size()));
  }
  return lms;
}

Landmarks Landmarks::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open landmarks " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string Landmarks::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const Point& p : points) pts.push_back({p.x, p.y});
  return nlohmann::json{{"points", pts}}.dump();
}

ForgeryMask generate_mask(const RgbImage& real, const RgbImage& fake) {
  require_same_size(real.size(), fake.size(), "generate_mask");
  const std::size_t pixels = real.size().area();
  std::vector<std::uint8_t> diff(pixels * 3);
  simd::active_kernels().abs_diff_u8(real.data().data(), fake.data().data(), diff.data(), diff.size());
  std::vector<double> values(pixels);
  for (std::size_t i = 0; i < pixels; ++i) {
    const int total = diff[3 * i] + diff[3 * i + 1] + diff[3 * i + 2];
    values[i] = static_cast<double>(total) / (3.0 * 255.0);
  }
  return ForgeryMask(real.width(), real.height(), std::move(values));
}

namespace {

double cross(const Point& o, const Point& a, const Point& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

double polygon_area(const std::vector<Point>& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % poly.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

}  // namespace

PixelSet fill_convex_hull(std::span<const Point> pts, int width, int height) {
  std::vector<Point> clamped;
  clamped.reserve(pts.size());
  for (const Point& p : pts) {
    clamped.push_back({std::clamp(p.x, 0.0, width - 1.0), std::clamp(p.y, 0.0, height - 1.0)});
  }
  const auto hull = convex_hull(std::move(clamped));
  if (hull.size() < 3 || std::abs(polygon_area(hull)) < 1e-9) {
    throw Error(ErrorCode::DegenerateHull, "landmark hull has zero area");
  }
  double x0 = hull[0].x, x1 = hull[0].x, y0 = hull[0].y, y1 = hull[0].y;
  for (const Point& p : hull) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  PixelSet out(width, height);
  constexpr double eps = 1e-9;
  for (int y = static_cast<int>(std::ceil(y0 - eps)); y <= static_cast<int>(std::floor(y1 + eps)); ++y) {
    for (int x = static_cast<int>(std::ceil(x0 - eps)); x <= static_cast<int>(std::floor(x1 + eps)); ++x) {
      const Point p{static_cast<double>(x), static_cast<double>(y)};
      bool inside = true;
      for (std::size_t i = 0; i < hull.size() && inside; ++i) {
        inside = cross(hull[i], hull[(i + 1) % hull.size()], p) >= -eps;
      }
      if (inside) out.set(x, y);
    }
  }
  return out;
}

RegionMap partition_regions(const Landmarks& lms, int width, int height, int eye_dilation) {
  if (lms.points.size() != Landmarks::kCount) throw Error(ErrorCode::InvalidArgument, "expected 68 landmarks");
  const std::span<const Point> all(lms.points);
  auto hull = [&](std::size_t first, std::size_t last) { return fill_convex_hull(all.subspan(first, last - first + 1), width, height); };

  RegionMap map;
  const PixelSet mouth = hull(48, 67);
  const PixelSet nose = hull(27, 35) - mouth;
  const PixelSet eyes = vision::dilate(hull(36, 41) | hull(42, 47), eye_dilation) - mouth - nose;
  const PixelSet face = hull(0, 67) - mouth - nose - eyes;
  map[RegionName::Mouth] = mouth;
  map[RegionName::Nose] = nose;
  map[RegionName::Eyes] = eyes;
  map[RegionName::Face] = face;
  return map;
}

std::array<double, 4> region_means(const ForgeryMask& mask, const RegionMap& map) {
  std::array<double, 4> means{};
  for (RegionName r : kRegionOrder) {
    const PixelSet& set = map[r];
    require_same_size(mask.size(), set.size(), "region_means");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < mask.height(); ++y) {
      for (int x = 0; x < mask.width(); ++x) {
        if (!set.test(x, y)) continue;
        sum += mask.at(x, y);
        ++count;
      }
    }
    if (count == 0) throw Error(ErrorCode::EmptyRegionMap, std::string("region ") + std::string(to_string(r)) + " has no pixels");
    means[static_cast<std::size_t>(r)] = sum / static_cast<double>(count);
  }
  return means;
}

ForgeryRegionList extract_forgery_regions(const ForgeryMask& mask, const RegionMap& map, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in [0,1]");
  const auto means = region_means(mask, map);
  ForgeryRegionList list;
  for (RegionName r : kRegionOrder) {
    const double m = means[static_cast<std::size_t>(r)];
    if (m > theta) list.push_back({r, m});
  }
  std::stable_sort(list.begin(), list.end(), [](const RegionEntry& a, const RegionEntry& b) { return a.mean > b.mean; });
  return list;
}

RegionName select_region(const ForgeryRegionList& list, std::uint64_t seed) {
  if (list.empty()) throw Error(ErrorCode::EmptyList, "cannot select from an empty forgery region list");
  std::mt19937_64 gen(seed);
  return list[gen() % list.size()].region;
}

}  // namespace fftg
