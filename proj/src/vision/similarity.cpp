#include <vector>

#include "fftg/simd.hpp"
#include "fftg/vision.hpp"

namespace fftg::vision {

MaskedStats masked_stats(std::span<const double> plane, const PixelSet& region) {
  if (plane.size() != region.size().area()) throw Error(ErrorCode::DimensionMismatch, "plane does not match region frame");
  const auto& k = simd::active_kernels();
  const auto mask = region.bytes();
  MaskedStats s;
  s.count = region.count();
  if (s.count == 0) return s;
  const double n = static_cast<double>(s.count);
  s.mean = k.masked_sum(plane.data(), mask.data(), plane.size()) / n;
  s.variance = k.masked_sq_dev(plane.data(), mask.data(), s.mean, plane.size()) / n;
  return s;
}

namespace {

constexpr double kC1 = (kSsimK1 * kSsimRange) * (kSsimK1 * kSsimRange);
constexpr double kC2 = (kSsimK2 * kSsimRange) * (kSsimK2 * kSsimRange);

double global_ssim(const GrayImage& a, const GrayImage& b, const PixelSet& region) {
  const auto& k = simd::active_kernels();
  const MaskedStats sa = masked_stats(a.data(), region);
  const MaskedStats sb = masked_stats(b.data(), region);
  const std::size_t n = a.size().area();
  std::vector<double> da(n), db(n), prod(n);
  for (std::size_t i = 0; i < n; ++i) {
    da[i] = a.data()[i] - sa.mean;
    db[i] = b.data()[i] - sb.mean;
  }
  k.multiply(da.data(), db.data(), prod.data(), n);
  const double cov = k.masked_sum(prod.data(), region.bytes().data(), n) / static_cast<double>(sa.count);
  const double num = (2.0 * sa.mean * sb.mean + kC1) * (2.0 * cov + kC2);
  const double den = (sa.mean * sa.mean + sb.mean * sb.mean + kC1) * (sa.variance + sb.variance + kC2);
  return num / den;
}

// 8x8 box sums of a crop via two separable passes; out is (bw-7) x (bh-7).
std::vector<double> window_sums(const std::vector<double>& crop, int bw, int bh) {
  const auto& k = simd::active_kernels();
  constexpr int win = kSsimWindow;
  static constexpr double ones[win] = {1, 1, 1, 1, 1, 1, 1, 1};
  const int ow = bw - win + 1, oh = bh - win + 1;
  std::vector<double> horiz(static_cast<std::size_t>(bh) * ow);
  const double* src[win];
  for (int y = 0; y < bh; ++y) {
    for (int t = 0; t < win; ++t) src[t] = crop.data() + static_cast<std::size_t>(y) * bw + t;
    k.weighted_sum(src, ones, win, horiz.data() + static_cast<std::size_t>(y) * ow, ow);
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int t = 0; t < win; ++t) src[t] = horiz.data() + static_cast<std::size_t>(y + t) * ow;
    k.weighted_sum(src, ones, win, out.data() + static_cast<std::size_t>(y) * ow, ow);
  }
  return out;
}

}  // namespace

double ssim(const GrayImage& a, const GrayImage& b, const PixelSet& region) {
  require_same_size(a.size(), b.size(), "ssim images");
  require_same_size(a.size(), region.size(), "ssim region");
  if (region.none()) throw Error(ErrorCode::EmptyRegion, "ssim over an empty region");

  const BoundingBox box = region.bounds();
  const int bw = box.width(), bh = box.height();
  if (bw < kSsimWindow || bh < kSsimWindow) return global_ssim(a, b, region);

  const auto& k = simd::active_kernels();
  const std::size_t n = static_cast<std::size_t>(bw) * bh;
  std::vector<double> ca(n), cb(n), caa(n), cbb(n), cab(n);
  for (int y = 0; y < bh; ++y) {
    for (int x = 0; x < bw; ++x) {
      ca[static_cast<std::size_t>(y) * bw + x] = a.at(box.x0 + x, box.y0 + y);
      cb[static_cast<std::size_t>(y) * bw + x] = b.at(box.x0 + x, box.y0 + y);
    }
  }
  k.multiply(ca.data(), ca.data(), caa.data(), n);
  k.multiply(cb.data(), cb.data(), cbb.data(), n);
  k.multiply(ca.data(), cb.data(), cab.data(), n);

  const auto sa = window_sums(ca, bw, bh);
  const auto sb = window_sums(cb, bw, bh);
  const auto saa = window_sums(caa, bw, bh);
  const auto sbb = window_sums(cbb, bw, bh);
  const auto sab = window_sums(cab, bw, bh);

  const std::size_t windows = sa.size();
  std::vector<double> map(windows);
  k.ssim_map(sa.data(), sb.data(), saa.data(), sbb.data(), sab.data(), 1.0 / (kSsimWindow * kSsimWindow), kC1, kC2,
             map.data(), windows);
  const std::vector<std::uint8_t> all(windows, 1);
  return k.masked_sum(map.data(), all.data(), windows) / static_cast<double>(windows);
}

}  // namespace fftg::vision
