#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "fftg/simd.hpp"
#include "fftg/vision.hpp"

namespace fftg::vision {
namespace {

// Copy of img with `pad` replicated pixels on every side.
std::vector<double> replicate_pad(const GrayImage& img, int pad, int& stride) {
  const int w = img.width(), h = img.height();
  stride = w + 2 * pad;
  std::vector<double> out(static_cast<std::size_t>(stride) * (h + 2 * pad));
  for (int y = -pad; y < h + pad; ++y) {
    double* row = out.data() + static_cast<std::size_t>(y + pad) * stride;
    for (int x = -pad; x < w + pad; ++x) row[x + pad] = img.clamped(x, y);
  }
  return out;
}

// Horizontal then vertical pass of a 1-D kernel, replicate padding.
GrayImage separable(const GrayImage& img, std::span<const double> taps) {
  const auto& k = simd::active_kernels();
  const int w = img.width(), h = img.height();
  const int r = static_cast<int>(taps.size() / 2);
  int stride = 0;
  const std::vector<double> padded = replicate_pad(img, r, stride);

  // Horizontal pass over every padded row, so the vertical pass sees replicated rows.
  const int rows = h + 2 * r;
  std::vector<double> horiz(static_cast<std::size_t>(rows) * w);
  std::vector<const double*> src(taps.size());
  for (int y = 0; y < rows; ++y) {
    const double* row = padded.data() + static_cast<std::size_t>(y) * stride;
    for (std::size_t t = 0; t < taps.size(); ++t) src[t] = row + t;
    k.weighted_sum(src.data(), taps.data(), taps.size(), horiz.data() + static_cast<std::size_t>(y) * w, w);
  }
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (std::size_t t = 0; t < taps.size(); ++t) src[t] = horiz.data() + static_cast<std::size_t>(y + t) * w;
    k.weighted_sum(src.data(), taps.data(), taps.size(), out.row(y).data(), w);
  }
  return out;
}

}  // namespace

GrayImage correlate3x3(const GrayImage& img, std::span<const double, 9> kernel) {
  const auto& k = simd::active_kernels();
  const int w = img.width(), h = img.height();
  int stride = 0;
  const std::vector<double> padded = replicate_pad(img, 1, stride);

  GrayImage out(w, h);
  std::vector<const double*> src;
  std::vector<double> weights;
  for (int y = 0; y < h; ++y) {
    src.clear();
    weights.clear();
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const double wgt = kernel[ky * 3 + kx];
        if (wgt == 0.0) continue;
        src.push_back(padded.data() + static_cast<std::size_t>(y + ky) * stride + kx);
        weights.push_back(wgt);
      }
    }
    if (src.empty()) continue;
    k.weighted_sum(src.data(), weights.data(), src.size(), out.row(y).data(), w);
  }
  return out;
}

GrayImage laplacian(const GrayImage& img) {
  static constexpr double kernel[9] = {0, 1, 0, 1, -4, 1, 0, 1, 0};
  return correlate3x3(img, kernel);
}

double laplacian_variance(const GrayImage& img, const PixelSet& region) {
  require_same_size(img.size(), region.size(), "laplacian_variance");
  if (region.none()) throw Error(ErrorCode::EmptyRegion, "laplacian_variance over an empty region");
  const GrayImage response = laplacian(img);
  return masked_stats(response.data(), region).variance;
}

Gradients sobel(const GrayImage& img) {
  static constexpr double kx[9] = {-1, 0, 1, -2, 0, 2, -1, 0, 1};
  static constexpr double ky[9] = {-1, -2, -1, 0, 0, 0, 1, 2, 1};
  return {correlate3x3(img, kx), correlate3x3(img, ky)};
}

GrayImage sobel_magnitude(const GrayImage& img) {
  const Gradients g = sobel(img);
  GrayImage out(img.width(), img.height());
  simd::active_kernels().magnitude(g.gx.data().data(), g.gy.data().data(), out.data().data(), img.size().area());
  return out;
}

GrayImage gaussian_blur(const GrayImage& img, double sigma, int ksize) {
  if (ksize < 1 || ksize % 2 == 0 || sigma <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "gaussian_blur needs an odd kernel size and positive sigma");
  }
  std::vector<double> taps(static_cast<std::size_t>(ksize));
  const int r = ksize / 2;
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += taps[i + r];
  }
  for (double& t : taps) t /= total;
  return separable(img, taps);
}

PixelSet canny(const GrayImage& img, double low, double high, double sigma) {
  if (!(low >= 0.0) || !(low <= high)) throw Error(ErrorCode::InvalidArgument, "canny requires 0 <= low <= high");
  const int w = img.width(), h = img.height();
  const GrayImage smoothed = gaussian_blur(img, sigma, 5);
  const Gradients g = sobel(smoothed);
  GrayImage mag(w, h);
  simd::active_kernels().magnitude(g.gx.data().data(), g.gy.data().data(), mag.data().data(), img.size().area());

  auto mag_at = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag.at(x, y); };

  // Non-maximum suppression, gradient direction quantized into four sectors.
  // A pixel survives if strictly above the neighbour behind it and not below
  // the one ahead, which keeps exactly one pixel on symmetric ridges.
  std::vector<std::uint8_t> state(static_cast<std::size_t>(w) * h, 0);  // 0 none, 1 weak, 2 strong
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mag.at(x, y);
      if (!(m > low)) continue;
      double angle = std::atan2(g.gy.at(x, y), g.gx.at(x, y)) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      int dx = 0, dy = 0;
      if (angle < 22.5 || angle >= 157.5) {
        dx = 1;
      } else if (angle < 67.5) {
        dx = 1;
        dy = 1;
      } else if (angle < 112.5) {
        dy = 1;
      } else {
        dx = -1;
        dy = 1;
      }
      if (m > mag_at(x - dx, y - dy) && m >= mag_at(x + dx, y + dy)) {
        state[static_cast<std::size_t>(y) * w + x] = m > high ? 2 : 1;
      }
    }
  }

  // Hysteresis: weak pixels 8-connected to a strong pixel become edges.
  PixelSet edges(w, h);
  std::deque<std::pair<int, int>> frontier;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (state[static_cast<std::size_t>(y) * w + x] == 2) {
        edges.set(x, y);
        frontier.emplace_back(x, y);
      }
    }
  }
  while (!frontier.empty()) {
    const auto [cx, cy] = frontier.front();
    frontier.pop_front();
    for (int oy = -1; oy <= 1; ++oy) {
      for (int ox = -1; ox <= 1; ++ox) {
        const int nx = cx + ox, ny = cy + oy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h || edges.test(nx, ny)) continue;
        if (state[static_cast<std::size_t>(ny) * w + nx] == 1) {
          edges.set(nx, ny);
          frontier.emplace_back(nx, ny);
        }
      }
    }
  }
  return edges;
}

}  // namespace fftg::vision
