// AArch64 NEON variant. Four-lane reductions are carried as two float64x2
// halves so the summation order matches the scalar reference.

#include "fftg/simd.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>

namespace fftg::simd {
namespace {

void rgb_to_gray(const std::uint8_t* rgb, double* out, std::size_t pixels) {
  std::size_t i = 0;
  for (; i + 8 <= pixels; i += 8) {
    const uint8x8x3_t px = vld3_u8(rgb + 3 * i);
    const uint16x8_t r = vmovl_u8(px.val[0]);
    const uint16x8_t g = vmovl_u8(px.val[1]);
    const uint16x8_t b = vmovl_u8(px.val[2]);
    for (int half = 0; half < 2; ++half) {
      const uint16x4_t r4 = half ? vget_high_u16(r) : vget_low_u16(r);
      const uint16x4_t g4 = half ? vget_high_u16(g) : vget_low_u16(g);
      const uint16x4_t b4 = half ? vget_high_u16(b) : vget_low_u16(b);
      uint32x4_t sum = vmull_n_u16(r4, 299);
      sum = vmlal_n_u16(sum, g4, 587);
      sum = vmlal_n_u16(sum, b4, 114);
      const float64x2_t lo = vcvtq_f64_u64(vmovl_u32(vget_low_u32(sum)));
      const float64x2_t hi = vcvtq_f64_u64(vmovl_u32(vget_high_u32(sum)));
      const float64x2_t k = vdupq_n_f64(1000.0);
      vst1q_f64(out + i + 4 * half, vdivq_f64(lo, k));
      vst1q_f64(out + i + 4 * half + 2, vdivq_f64(hi, k));
    }
  }
  for (; i < pixels; ++i) {
    const std::int32_t weighted = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
    out[i] = static_cast<double>(weighted) / 1000.0;
  }
}

void abs_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(out + i, vabdq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
  for (; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
}

void weighted_sum(const double* const* sources, const double* weights, std::size_t taps, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vmulq_n_f64(vld1q_f64(sources[0] + i), weights[0]);
    for (std::size_t k = 1; k < taps; ++k) acc = vaddq_f64(acc, vmulq_n_f64(vld1q_f64(sources[k] + i), weights[k]));
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * sources[0][i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * sources[k][i];
    out[i] = acc;
  }
}

void magnitude(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t va = vld1q_f64(a + i);
    const float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vsqrtq_f64(vaddq_f64(vmulq_f64(va, va), vmulq_f64(vb, vb))));
  }
  for (; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

inline float64x2_t select(const std::uint8_t* m, float64x2_t v) {
  const uint64x2_t keep = {m[0] ? ~0ull : 0ull, m[1] ? ~0ull : 0ull};
  return vreinterpretq_f64_u64(vandq_u64(keep, vreinterpretq_u64_f64(v)));
}

double finish(float64x2_t lo, float64x2_t hi, const double* v, const std::uint8_t* mask, std::size_t from,
              std::size_t n, bool squared, double center) {
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (std::size_t i = from; i < n; ++i) {
    const double d = squared ? (v[i] - center) * (v[i] - center) : v[i];
    lane[i & 3] = lane[i & 3] + (mask[i] ? d : 0.0);
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double masked_sum(const double* v, const std::uint8_t* mask, std::size_t n) {
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vaddq_f64(lo, select(mask + i, vld1q_f64(v + i)));
    hi = vaddq_f64(hi, select(mask + i + 2, vld1q_f64(v + i + 2)));
  }
  return finish(lo, hi, v, mask, i, n, false, 0.0);
}

double masked_sq_dev(const double* v, const std::uint8_t* mask, double center, std::size_t n) {
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t d0 = vsubq_f64(vld1q_f64(v + i), c);
    const float64x2_t d1 = vsubq_f64(vld1q_f64(v + i + 2), c);
    lo = vaddq_f64(lo, select(mask + i, vmulq_f64(d0, d0)));
    hi = vaddq_f64(hi, select(mask + i + 2, vmulq_f64(d1, d1)));
  }
  return finish(lo, hi, v, mask, i, n, true, center);
}

void ssim_map(const double* sa, const double* sb, const double* saa, const double* sbb, const double* sab,
              double inv_count, double c1, double c2, double* out, std::size_t n) {
  const float64x2_t vc1 = vdupq_n_f64(c1);
  const float64x2_t vc2 = vdupq_n_f64(c2);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t mu_a = vmulq_n_f64(vld1q_f64(sa + i), inv_count);
    const float64x2_t mu_b = vmulq_n_f64(vld1q_f64(sb + i), inv_count);
    const float64x2_t var_a = vsubq_f64(vmulq_n_f64(vld1q_f64(saa + i), inv_count), vmulq_f64(mu_a, mu_a));
    const float64x2_t var_b = vsubq_f64(vmulq_n_f64(vld1q_f64(sbb + i), inv_count), vmulq_f64(mu_b, mu_b));
    const float64x2_t cov = vsubq_f64(vmulq_n_f64(vld1q_f64(sab + i), inv_count), vmulq_f64(mu_a, mu_b));
    const float64x2_t num = vmulq_f64(vaddq_f64(vmulq_f64(vmulq_n_f64(mu_a, 2.0), mu_b), vc1),
                                      vaddq_f64(vmulq_n_f64(cov, 2.0), vc2));
    const float64x2_t den = vmulq_f64(vaddq_f64(vaddq_f64(vmulq_f64(mu_a, mu_a), vmulq_f64(mu_b, mu_b)), vc1),
                                      vaddq_f64(vaddq_f64(var_a, var_b), vc2));
    vst1q_f64(out + i, vdivq_f64(num, den));
  }
  for (; i < n; ++i) {
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

constexpr KernelTable kNeon{
    Isa::Neon, "neon", rgb_to_gray, abs_diff_u8, weighted_sum, magnitude, multiply, masked_sum, masked_sq_dev,
    ssim_map,
};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

}  // namespace fftg::simd

#else

namespace fftg::simd {
const KernelTable* neon_kernels() { return nullptr; }
}  // namespace fftg::simd

#endif
