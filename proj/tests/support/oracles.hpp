#pragma once

// Brute-force reference computations for tests. Written from the textbook
// definitions in long double, sharing no code with the library kernels.

#include <cstdint>
#include <random>
#include <vector>

#include "fftg/image.hpp"

namespace oracle {

using Real = long double;

// Deterministic random inputs.
struct Gen {
  std::mt19937_64 mt;
  explicit Gen(std::uint64_t seed) : mt(seed) {}
  double unit() { return static_cast<double>(mt() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(mt() % static_cast<std::uint64_t>(n)); }

  fftg::RgbImage rgb(int w, int h);
  // Integer-valued (0..255) or fractional plane, chosen per call.
  fftg::GrayImage gray(int w, int h);
  // Rectangle, ellipse or scattered blob; never empty.
  fftg::PixelSet region(int w, int h);
};

Real gray_value(std::uint8_t r, std::uint8_t g, std::uint8_t b);

struct LabL {
  Real l, a, b;
};
LabL cielab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

// 3x3 correlation at (x,y) with replicate padding, straight from the definition.
Real correlate_at(const fftg::GrayImage& img, const Real kernel[9], int x, int y);

Real laplacian_variance(const fftg::GrayImage& img, const fftg::PixelSet& region);
std::vector<Real> sobel_magnitude(const fftg::GrayImage& img);

// Mean over all 8x8 windows of the region's bounding box, each window's
// statistics computed directly; global statistics when the box is smaller.
Real ssim(const fftg::GrayImage& a, const fftg::GrayImage& b, const fftg::PixelSet& region);

// Enumerates every in-region ordered neighbour pair in four directions.
Real glcm_contrast(const fftg::GrayImage& img, const fftg::PixelSet& region);

// Direct O(N^4) 2-D DCT-II.
std::vector<Real> dct2(const std::vector<Real>& block, int w, int h);
Real dct_band_ratio(const fftg::GrayImage& img, const fftg::PixelSet& region, Real low_fraction);

// L1-ball morphology by exhaustive search; erosion treats off-frame pixels as outside.
fftg::PixelSet dilate_l1(const fftg::PixelSet& s, int r);
fftg::PixelSet erode_l1(const fftg::PixelSet& s, int r);

Real masked_mean(const std::vector<Real>& plane, int width, const fftg::PixelSet& region);

// Relative error with a floor of one on the denominator.
Real rel_err(Real got, Real want);

}  // namespace oracle
