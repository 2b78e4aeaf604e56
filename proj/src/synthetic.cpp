#include "fftg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fftg/png_io.hpp"
#include "json.hpp"
#include <fstream>
#include <random>

namespace fftg::synthetic {

namespace {

// Portable draws straight from the engine; library distributions vary across vendors.
struct Rng {
  std::mt19937_64 mt;
  explicit Rng(std::uint64_t seed) : mt(seed) {}
  double unit() { return static_cast<double>(mt() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t below(std::uint64_t n) { return mt() % n; }
};

std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

void ellipse_points(std::vector<Point>& out, double cx, double cy, double rx, double ry, int n, double start) {
  for (int j = 0; j < n; ++j) {
    const double t = start + 2.0 * std::numbers::pi * j / n;
    out.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
  }
}

bool inside_ellipse(double x, double y, double cx, double cy, double rx, double ry) {
  const double dx = (x - cx) / rx, dy = (y - cy) / ry;
  return dx * dx + dy * dy <= 1.0;
}

}  // namespace

std::string_view to_string(Edit e) {
  switch (e) {
    case Edit::ColorShift: return "color_shift";
    case Edit::Blur: return "blur";
    case Edit::Warp: return "warp";
    case Edit::Paste: return "paste";
    case Edit::Flatten: return "flatten";
  }
  return "unknown";
}

Landmarks template_landmarks(int width, int height, std::uint64_t seed, double jitter) {
  const double w = width, h = height;
  const double cx = 0.5 * w, cy = 0.5 * h;
  std::vector<Point> p;
  p.reserve(Landmarks::kCount);
  // 0-16 jaw: left temple, under the chin, right temple.
  for (int i = 0; i <= 16; ++i) {
    const double t = std::numbers::pi - std::numbers::pi * i / 16.0;
    p.push_back({cx + 0.36 * w * std::cos(t), cy + 0.42 * h * std::sin(t)});
  }
  // 17-26 brows.
  for (const double x0 : {cx - 0.28 * w, cx + 0.08 * w}) {
    for (int i = 0; i < 5; ++i) {
      p.push_back({x0 + 0.05 * w * i, cy - 0.20 * h - 0.03 * h * std::sin(std::numbers::pi * i / 4.0)});
    }
  }
  // 27-30 bridge, 31-35 base.
  for (int i = 0; i < 4; ++i) p.push_back({cx, cy - 0.14 * h + 0.06 * h * i});
  for (int i = 0; i < 5; ++i) {
    p.push_back({cx - 0.07 * w + 0.035 * w * i, cy + 0.08 * h + (i == 2 ? 0.01 * h : 0.0)});
  }
  // 36-41, 42-47 eyes: outer corner, two upper, inner corner, two lower.
  for (int side = -1; side <= 1; side += 2) {
    const double ex = cx + side * 0.17 * w, ey = cy - 0.10 * h;
    const double a = 0.065 * w, b = 0.03 * h;
    const double xs[6] = {-a, -0.35 * a, 0.35 * a, a, 0.35 * a, -0.35 * a};
    const double ys[6] = {0.0, -b, -b, 0.0, b, b};
    for (int i = 0; i < 6; ++i) p.push_back({ex + xs[i], ey + ys[i]});
  }
  // 48-59 outer lip, 60-67 inner lip.
  const double mx = cx, my = cy + 0.22 * h;
  ellipse_points(p, mx, my, 0.14 * w, 0.06 * h, 12, std::numbers::pi);
  ellipse_points(p, mx, my, 0.09 * w, 0.025 * h, 8, std::numbers::pi);

  Rng rng(seed);
  for (Point& q : p) {
    q.x = std::clamp(q.x + rng.range(-jitter, jitter), 1.0, w - 2.0);
    q.y = std::clamp(q.y + rng.range(-jitter, jitter), 1.0, h - 2.0);
  }
  Landmarks lms;
  lms.points = std::move(p);
  return lms;
}

RgbImage render_face(const Landmarks& lms, int width, int height, std::uint64_t seed) {
  Rng rng(seed ^ 0x5eedf00dull);
  const double skin[3] = {rng.range(170, 215), rng.range(130, 170), rng.range(100, 140)};
  const double bg[3] = {rng.range(30, 90), rng.range(60, 120), rng.range(90, 160)};
  const double phase = rng.range(0, 2 * std::numbers::pi);
  const RegionMap parts = partition_regions(lms, width, height);
  const std::span<const Point> pts = lms.points;
  const PixelSet brows_l = fill_convex_hull(pts.subspan(17, 5), width, height);
  const PixelSet brows_r = fill_convex_hull(pts.subspan(22, 5), width, height);
  const PixelSet eye_l = fill_convex_hull(pts.subspan(36, 6), width, height);
  const PixelSet eye_r = fill_convex_hull(pts.subspan(42, 6), width, height);
  const PixelSet lips_inner = fill_convex_hull(pts.subspan(60, 8), width, height);

  RgbImage img(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double c[3];
      const double shade = 12.0 * std::sin(0.09 * x + 0.05 * y + phase);
      if (parts[RegionName::Face].test(x, y) || parts[RegionName::Nose].test(x, y) ||
          parts[RegionName::Mouth].test(x, y) || parts[RegionName::Eyes].test(x, y) ||
          inside_ellipse(x, y, 0.5 * width, 0.5 * height, 0.36 * width, 0.42 * height)) {
        for (int k = 0; k < 3; ++k) c[k] = skin[k] + shade;
        if (parts[RegionName::Nose].test(x, y)) {
          for (int k = 0; k < 3; ++k) c[k] -= 18.0;
        }
        if (parts[RegionName::Mouth].test(x, y)) {
          c[0] = 175 + shade;
          c[1] = 75 + shade;
          c[2] = 80 + shade;
        }
        if (lips_inner.test(x, y)) {
          c[0] = 90;
          c[1] = 30;
          c[2] = 35;
        }
        if (brows_l.test(x, y) || brows_r.test(x, y)) {
          c[0] = 70;
          c[1] = 50;
          c[2] = 40;
        }
        if (eye_l.test(x, y) || eye_r.test(x, y)) {
          c[0] = 235;
          c[1] = 235;
          c[2] = 230;
          const double ex = eye_l.test(x, y) ? 0.5 * (pts[36].x + pts[39].x) : 0.5 * (pts[42].x + pts[45].x);
          const double ey = eye_l.test(x, y) ? 0.5 * (pts[36].y + pts[39].y) : 0.5 * (pts[42].y + pts[45].y);
          if (std::hypot(x - ex, y - ey) < 0.03 * width) {
            c[0] = 60;
            c[1] = 45;
            c[2] = 35;
          }
        }
      } else {
        for (int k = 0; k < 3; ++k) c[k] = bg[k] + 0.3 * (x + y) * (k == 2 ? 0.5 : 0.2);
      }
      const double n = rng.range(-40.0, 40.0);
      img.set(x, y, clamp_u8(c[0] + n + rng.range(-6, 6)), clamp_u8(c[1] + n + rng.range(-6, 6)),
              clamp_u8(c[2] + n + rng.range(-6, 6)));
    }
  }
  return img;
}

namespace {

RgbImage box_blur(const RgbImage& img, int radius, int passes) {
  RgbImage cur = img;
  const int w = img.width(), h = img.height();
  for (int pass = 0; pass < passes; ++pass) {
    RgbImage tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int k = 0; k < 3; ++k) {
          int s = 0;
          for (int d = -radius; d <= radius; ++d) s += cur.pixel(std::clamp(x + d, 0, w - 1), y)[k];
          tmp.pixel(x, y)[k] = clamp_u8(static_cast<double>(s) / (2 * radius + 1));
        }
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int k = 0; k < 3; ++k) {
          int s = 0;
          for (int d = -radius; d <= radius; ++d) s += tmp.pixel(x, std::clamp(y + d, 0, h - 1))[k];
          out.pixel(x, y)[k] = clamp_u8(static_cast<double>(s) / (2 * radius + 1));
        }
      }
    }
    cur = std::move(out);
  }
  return cur;
}

}  // namespace

RgbImage apply_edit(const RgbImage& img, const PixelSet& region, Edit edit, const RgbImage& donor) {
  require_same_size(img.size(), region.size(), "apply_edit");
  const int w = img.width(), h = img.height();
  RgbImage out = img;
  switch (edit) {
    case Edit::ColorShift: {
      double mean[3] = {0, 0, 0};
      const double n = static_cast<double>(region.count());
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y))
            for (int k = 0; k < 3; ++k) mean[k] += img.pixel(x, y)[k];
      for (double& m : mean) m /= std::max(1.0, n);
      const double shift[3] = {30.0, -22.0, -28.0};
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y))
            for (int k = 0; k < 3; ++k) out.pixel(x, y)[k] = clamp_u8(mean[k] + 0.6 * (img.pixel(x, y)[k] - mean[k]) + shift[k]);
      break;
    }
    case Edit::Blur: {
      const RgbImage soft = box_blur(img, 2, 3);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y)) std::copy_n(soft.pixel(x, y), 3, out.pixel(x, y));
      break;
    }
    case Edit::Warp: {
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y)) {
            const int sx = std::clamp(x + 3 + static_cast<int>(std::lround(2.0 * std::sin(0.3 * y))), 0, w - 1);
            const int sy = std::clamp(y + 2, 0, h - 1);
            std::copy_n(img.pixel(sx, sy), 3, out.pixel(x, y));
          }
      break;
    }
    case Edit::Paste: {
      require_same_size(img.size(), donor.size(), "apply_edit donor");
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y)) std::copy_n(donor.pixel(x, y), 3, out.pixel(x, y));
      break;
    }
    case Edit::Flatten: {
      const RgbImage soft = box_blur(img, 4, 3);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (region.test(x, y))
            for (int k = 0; k < 3; ++k) out.pixel(x, y)[k] = clamp_u8(soft.pixel(x, y)[k] + 20.0);
      break;
    }
  }
  return out;
}

Pair make_pair(std::uint64_t seed, int width, int height, int edited_regions) {
  Rng rng(seed);
  Pair p;
  p.landmarks = template_landmarks(width, height, rng.mt());
  p.real = render_face(p.landmarks, width, height, rng.mt());
  const int count = edited_regions >= 0 ? std::min(edited_regions, 4) : 1 + static_cast<int>(rng.below(2));
  p.fake = p.real;
  if (count == 0) return p;

  const RegionMap parts = partition_regions(p.landmarks, width, height);
  std::vector<RegionName> pool(kRegionOrder.begin(), kRegionOrder.end());
  const Landmarks donor_lms = template_landmarks(width, height, rng.mt());
  const RgbImage donor = render_face(donor_lms, width, height, rng.mt());
  for (int i = 0; i < count; ++i) {
    const std::size_t pick = rng.below(pool.size());
    const RegionName r = pool[pick];
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    const Edit e = static_cast<Edit>(rng.below(5));
    p.fake = apply_edit(p.fake, parts[r], e, donor);
    p.edits.emplace_back(r, e);
  }
  return p;
}

void write_pair(const std::filesystem::path& root, const std::string& method, const std::string& id, const Pair& p) {
  io::write_png(root / "real" / (id + ".png"), p.real);
  io::write_png(root / "fake" / method / (id + ".png"), p.fake);
  std::filesystem::create_directories(root / "landmarks");
  std::ofstream out(root / "landmarks" / (id + ".json"));
  if (!out) throw Error(ErrorCode::Io, "cannot write landmarks for " + id);
  out << p.landmarks.to_json() << '\n';
}

}  // namespace fftg::synthetic
