#include <cmath>

#include "fftg/simd.hpp"

namespace fftg::simd {
namespace {

void rgb_to_gray(const std::uint8_t* rgb, double* out, std::size_t pixels) {
  for (std::size_t i = 0; i < pixels; ++i) {
    const std::int32_t weighted = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
    out[i] = static_cast<double>(weighted) / 1000.0;
  }
}

void abs_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
}

void weighted_sum(const double* const* sources, const double* weights, std::size_t taps, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = weights[0] * sources[0][i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * sources[k][i];
    out[i] = acc;
  }
}

void magnitude(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

double masked_sum(const double* v, const std::uint8_t* mask, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] = lane[i & 3] + (mask[i] ? v[i] : 0.0);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double masked_sq_dev(const double* v, const std::uint8_t* mask, double center, std::size_t n) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - center;
    lane[i & 3] = lane[i & 3] + (mask[i] ? d * d : 0.0);
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

void ssim_map(const double* sa, const double* sb, const double* saa, const double* sbb, const double* sab,
              double inv_count, double c1, double c2, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double mu_a = sa[i] * inv_count;
    const double mu_b = sb[i] * inv_count;
    const double var_a = saa[i] * inv_count - mu_a * mu_a;
    const double var_b = sbb[i] * inv_count - mu_b * mu_b;
    const double cov = sab[i] * inv_count - mu_a * mu_b;
    const double num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2);
    const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2);
    out[i] = num / den;
  }
}

constexpr KernelTable kScalar{
    Isa::Scalar, "scalar", rgb_to_gray, abs_diff_u8, weighted_sum, magnitude, multiply, masked_sum, masked_sq_dev,
    ssim_map,
};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace fftg::simd
