#include <algorithm>
#include <array>
#include <cmath>

#include "fftg/simd.hpp"
#include "fftg/vision.hpp"

namespace fftg::vision {
namespace {

// D65 reference white.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;

const std::array<double, 256>& linear_table() {
  static const std::array<double, 256> table = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) {
      const double c = i / 255.0;
      t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
    }
    return t;
  }();
  return table;
}

double lab_f(double t) {
  constexpr double delta = 6.0 / 29.0;
  return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

GrayImage to_grayscale(const RgbImage& img) {
  GrayImage out(img.width(), img.height());
  simd::active_kernels().rgb_to_gray(img.data().data(), out.data().data(), img.size().area());
  return out;
}

Lab srgb_to_cielab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const auto& lin = linear_table();
  const double r = lin[r8], g = lin[g8], b = lin[b8];
  const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
  const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
  const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
  const double fx = lab_f(x / kWhiteX);
  const double fy = lab_f(y / kWhiteY);
  const double fz = lab_f(z / kWhiteZ);
  return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RgbImage& img) {
  LabImage out(img.width(), img.height());
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < img.size().area(); ++i) {
    const Lab lab = srgb_to_cielab(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    dst[3 * i] = std::clamp(lab.l * 255.0 / 100.0, 0.0, 255.0);
    dst[3 * i + 1] = std::clamp(lab.a + 128.0, 0.0, 255.0);
    dst[3 * i + 2] = std::clamp(lab.b + 128.0, 0.0, 255.0);
  }
  return out;
}

}  // namespace fftg::vision
