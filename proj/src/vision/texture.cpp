#include <algorithm>
#include <cmath>

#include "fftg/vision.hpp"

namespace fftg::vision {
namespace {

int quantize(double v) { return std::clamp(static_cast<int>(std::floor(v + 0.5)), 0, Glcm::kLevels - 1); }

}  // namespace

Glcm glcm(const GrayImage& img, const PixelSet& region) {
  require_same_size(img.size(), region.size(), "glcm");
  if (region.none()) throw Error(ErrorCode::EmptyRegion, "glcm over an empty region");

  const int w = img.width(), h = img.height();
  std::vector<int> levels(img.size().area());
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = quantize(img.data()[i]);

  Glcm m;
  m.matrix.assign(static_cast<std::size_t>(Glcm::kLevels) * Glcm::kLevels, 0.0);
  static constexpr int offsets[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // right, down, left, up
  for (const auto& off : offsets) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int nx = x + off[0], ny = y + off[1];
        if (!region.test(x, y) || !region.contains(nx, ny)) continue;
        const int i = levels[static_cast<std::size_t>(y) * w + x];
        const int j = levels[static_cast<std::size_t>(ny) * w + nx];
        m.matrix[static_cast<std::size_t>(i) * Glcm::kLevels + j] += 1.0;
        ++m.pairs;
      }
    }
  }
  if (m.pairs == 0) throw Error(ErrorCode::NoPairs, "region has no co-occurring pixel pairs");
  // Averaging the four directional count matrices and normalizing to unit
  // mass reduces to dividing the summed counts by the total pair count.
  const double total = static_cast<double>(m.pairs);
  for (double& v : m.matrix) v /= total;
  return m;
}

double glcm_contrast(const Glcm& m) {
  double acc = 0.0;
  for (int i = 0; i < Glcm::kLevels; ++i) {
    for (int j = 0; j < Glcm::kLevels; ++j) {
      const double p = m.at(i, j);
      if (p == 0.0) continue;
      acc += static_cast<double>((i - j) * (i - j)) * p;
    }
  }
  return acc / (static_cast<double>(Glcm::kLevels) * Glcm::kLevels);
}

double glcm_contrast(const GrayImage& img, const PixelSet& region) { return glcm_contrast(glcm(img, region)); }

}  // namespace fftg::vision
