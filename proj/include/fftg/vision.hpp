#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fftg/image.hpp"

namespace fftg::vision {

// Luminance with BT.601 weights, evaluated as (299R + 587G + 114B) / 1000.
GrayImage to_grayscale(const RgbImage& img);

// sRGB (D65) -> CIELAB, then 8-bit scaled: L*255/100, a+128, b+128, clamped to [0,255].
LabImage rgb_to_lab(const RgbImage& img);

// Unscaled CIELAB of a single sRGB triple.
struct Lab {
  double l, a, b;
};
Lab srgb_to_cielab(std::uint8_t r, std::uint8_t g, std::uint8_t b);

struct MaskedStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population
};

// Statistics of a plane (width*height values, row-major) over a region.
MaskedStats masked_stats(std::span<const double> plane, const PixelSet& region);

// 3x3 correlation with replicate padding. kernel is row-major, 9 taps.
GrayImage correlate3x3(const GrayImage& img, std::span<const double, 9> kernel);

// 4-neighbour Laplacian [[0,1,0],[1,-4,1],[0,1,0]], replicate padding.
GrayImage laplacian(const GrayImage& img);
double laplacian_variance(const GrayImage& img, const PixelSet& region);

struct Gradients {
  GrayImage gx;
  GrayImage gy;
};
Gradients sobel(const GrayImage& img);
GrayImage sobel_magnitude(const GrayImage& img);

// Separable Gaussian of odd size, sampled and normalized, replicate padding.
GrayImage gaussian_blur(const GrayImage& img, double sigma, int ksize = 5);

inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;
inline constexpr double kSsimRange = 255.0;

// Mean SSIM over 8x8 uniform windows inside the region's bounding box; falls
// back to one global SSIM over region pixels when the box is smaller than a window.
double ssim(const GrayImage& a, const GrayImage& b, const PixelSet& region);

struct Glcm {
  static constexpr int kLevels = 256;
  std::vector<double> matrix;  // kLevels*kLevels, row = reference level, col = neighbour level
  std::size_t pairs = 0;       // raw pair count over all four directions

  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * kLevels + j]; }
};

// Co-occurrence at distance 1 in the right, down, left and up directions,
// in-region pairs only, averaged and normalized to unit mass.
Glcm glcm(const GrayImage& img, const PixelSet& region);
// (1/65536) * sum |i-j|^2 P(i,j)
double glcm_contrast(const Glcm& m);
double glcm_contrast(const GrayImage& img, const PixelSet& region);

struct CannyParams {
  double low = 40.0;
  double high = 100.0;
  double sigma = 1.4;
};
PixelSet canny(const GrayImage& img, double low, double high, double sigma = 1.4);

// Orthonormal 2-D DCT-II of a row-major width x height block.
std::vector<double> dct2(std::span<const double> block, int width, int height);

// sum|F_high| / max(sum|F_low|, 1e-12) over the region's bounding-box crop with
// out-of-region pixels set to the region mean. Low band: radius < min(bw,bh)*low_fraction; DC in neither.
double dct_band_ratio(const GrayImage& img, const PixelSet& region, double low_fraction = 0.25);

// Radius-fold 3x3 cross. Erosion treats out-of-frame pixels as outside the set.
PixelSet dilate(const PixelSet& mask, int radius);
PixelSet erode(const PixelSet& mask, int radius);

}  // namespace fftg::vision
