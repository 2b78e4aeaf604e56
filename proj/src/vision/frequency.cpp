#include <algorithm>
#include <cmath>
#include <numbers>

#include "fftg/vision.hpp"

namespace fftg::vision {
namespace {

// basis[u*n + k] = alpha(u) * cos(pi * (2k+1) * u / (2n))
std::vector<double> dct_basis(int n) {
  std::vector<double> basis(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < n; ++u) {
    const double alpha = u == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k) {
      basis[static_cast<std::size_t>(u) * n + k] = alpha * std::cos(std::numbers::pi * (2 * k + 1) * u / (2.0 * n));
    }
  }
  return basis;
}

}  // namespace

std::vector<double> dct2(std::span<const double> block, int width, int height) {
  if (width < 1 || height < 1 || block.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "dct2 block size does not match dimensions");
  }
  const auto bx = dct_basis(width);
  const auto by = dct_basis(height);

  // Rows first, then columns.
  std::vector<double> rows(block.size());
  for (int y = 0; y < height; ++y) {
    const double* src = block.data() + static_cast<std::size_t>(y) * width;
    for (int u = 0; u < width; ++u) {
      const double* basis = bx.data() + static_cast<std::size_t>(u) * width;
      double acc = 0.0;
      for (int x = 0; x < width; ++x) acc += basis[x] * src[x];
      rows[static_cast<std::size_t>(y) * width + u] = acc;
    }
  }
  std::vector<double> out(block.size());
  for (int v = 0; v < height; ++v) {
    const double* basis = by.data() + static_cast<std::size_t>(v) * height;
    for (int u = 0; u < width; ++u) {
      double acc = 0.0;
      for (int y = 0; y < height; ++y) acc += basis[y] * rows[static_cast<std::size_t>(y) * width + u];
      out[static_cast<std::size_t>(v) * width + u] = acc;
    }
  }
  return out;
}

double dct_band_ratio(const GrayImage& img, const PixelSet& region, double low_fraction) {
  require_same_size(img.size(), region.size(), "dct_band_ratio");
  if (region.none()) throw Error(ErrorCode::EmptyRegion, "dct_band_ratio over an empty region");

  const BoundingBox box = region.bounds();
  const int bw = box.width(), bh = box.height();
  double sum = 0.0;
  double lo = img.at(box.x0, box.y0), hi = lo;
  bool first = true;
  for (int y = box.y0; y <= box.y1; ++y) {
    for (int x = box.x0; x <= box.x1; ++x) {
      if (!region.test(x, y)) continue;
      const double v = img.at(x, y);
      sum += v;
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (lo == hi) return 0.0;  // no AC content; avoids dividing rounding noise by rounding noise
  // Out-of-region pixels take the region mean so the fill adds no AC energy.
  std::vector<double> crop(static_cast<std::size_t>(bw) * bh, sum / static_cast<double>(region.count()));
  for (int y = 0; y < bh; ++y) {
    for (int x = 0; x < bw; ++x) {
      if (region.test(box.x0 + x, box.y0 + y)) crop[static_cast<std::size_t>(y) * bw + x] = img.at(box.x0 + x, box.y0 + y);
    }
  }
  const auto coeffs = dct2(crop, bw, bh);

  const double cutoff = std::min(bw, bh) * low_fraction;
  double low = 0.0, high = 0.0;
  for (int v = 0; v < bh; ++v) {
    for (int u = 0; u < bw; ++u) {
      if (u == 0 && v == 0) continue;
      const double mag = std::abs(coeffs[static_cast<std::size_t>(v) * bw + u]);
      if (std::sqrt(static_cast<double>(u * u + v * v)) < cutoff) {
        low += mag;
      } else {
        high += mag;
      }
    }
  }
  return high / std::max(low, 1e-12);
}

}  // namespace fftg::vision
