// Compiled with -mavx2 on x86-64 only; selected at runtime after a CPU check.

#include "fftg/simd.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <cmath>

namespace fftg::simd {
namespace {

void rgb_to_gray(const std::uint8_t* rgb, double* out, std::size_t pixels) {
  const __m128i pick_r = _mm_setr_epi8(0, -1, -1, -1, 3, -1, -1, -1, 6, -1, -1, -1, 9, -1, -1, -1);
  const __m128i pick_g = _mm_setr_epi8(1, -1, -1, -1, 4, -1, -1, -1, 7, -1, -1, -1, 10, -1, -1, -1);
  const __m128i pick_b = _mm_setr_epi8(2, -1, -1, -1, 5, -1, -1, -1, 8, -1, -1, -1, 11, -1, -1, -1);
  const __m128i wr = _mm_set1_epi32(299);
  const __m128i wg = _mm_set1_epi32(587);
  const __m128i wb = _mm_set1_epi32(114);
  const __m256d thousand = _mm256_set1_pd(1000.0);

  std::size_t i = 0;
  // A 16-byte load covers 4 pixels (12 bytes); stop while the overread stays in bounds.
  for (; 3 * i + 16 <= 3 * pixels; i += 4) {
    const __m128i px = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rgb + 3 * i));
    __m128i sum = _mm_mullo_epi32(_mm_shuffle_epi8(px, pick_r), wr);
    sum = _mm_add_epi32(sum, _mm_mullo_epi32(_mm_shuffle_epi8(px, pick_g), wg));
    sum = _mm_add_epi32(sum, _mm_mullo_epi32(_mm_shuffle_epi8(px, pick_b), wb));
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_cvtepi32_pd(sum), thousand));
  }
  for (; i < pixels; ++i) {
    const std::int32_t weighted = 299 * rgb[3 * i] + 587 * rgb[3 * i + 1] + 114 * rgb[3 * i + 2];
    out[i] = static_cast<double>(weighted) / 1000.0;
  }
}

void abs_diff_u8(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i d = _mm256_or_si256(_mm256_subs_epu8(va, vb), _mm256_subs_epu8(vb, va));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), d);
  }
  for (; i < n; ++i) out[i] = static_cast<std::uint8_t>(a[i] > b[i] ? a[i] - b[i] : b[i] - a[i]);
}

void weighted_sum(const double* const* sources, const double* weights, std::size_t taps, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(weights[0]), _mm256_loadu_pd(sources[0] + i));
    for (std::size_t k = 1; k < taps; ++k) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[k]), _mm256_loadu_pd(sources[k] + i)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = weights[0] * sources[0][i];
    for (std::size_t k = 1; k < taps; ++k) acc = acc + weights[k] * sources[k][i];
    out[i] = acc;
  }
}

void magnitude(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d va = _mm256_loadu_pd(a + i);
    const __m256d vb = _mm256_loadu_pd(b + i);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(va, va), _mm256_mul_pd(vb, vb))));
  }
  for (; i < n; ++i) out[i] = std::sqrt(a[i] * a[i] + b[i] * b[i]);
}

void multiply(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

// All-ones lanes where the four mask bytes at m are nonzero.
inline __m256d lane_mask(const std::uint8_t* m) {
  std::int32_t packed;
  __builtin_memcpy(&packed, m, 4);
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
  const __m256i is_zero = _mm256_cmpeq_epi64(wide, _mm256_setzero_si256());
  return _mm256_castsi256_pd(_mm256_xor_si256(is_zero, _mm256_set1_epi64x(-1)));
}

double finish_lanes(__m256d acc, const double* v, const std::uint8_t* mask, std::size_t from, std::size_t n,
                    bool squared, double center) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t i = from; i < n; ++i) {
    const double d = squared ? (v[i] - center) * (v[i] - center) : v[i];
    lane[i & 3] = lane[i & 3] + (mask[i] ? d : 0.0);
  }
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double masked_sum(const double* v, const std::uint8_t* mask, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_and_pd(lane_mask(mask + i), _mm256_loadu_pd(v + i)));
  return finish_lanes(acc, v, mask, i, n, false, 0.0);
}

double masked_sq_dev(const double* v, const std::uint8_t* mask, double center, std::size_t n) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(v + i), c);
    acc = _mm256_add_pd(acc, _mm256_and_pd(lane_mask(mask + i), _mm256_mul_pd(d, d)));
  }
  return finish_lanes(acc, v, mask, i, n, true, center);
}

void ssim_map(const double* sa, const double* sb, const double* saa, const double* sbb, const double* sab,
              double inv_count, double c1, double c2, double* out, std::size_t n) {
  const __m256d inv = _mm256_set1_pd(inv_count);
  const __m256d vc1 = _mm256_set1_pd(c1);
  const __m256d vc2 = _mm256_set1_pd(c2);
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d mu_a = _mm256_mul_pd(_mm256_loadu_pd(sa + i), inv);
    const __m256d mu_b = _mm256_mul_pd(_mm256_loadu_pd(sb + i), inv);
    const __m256d var_a = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(saa + i), inv), _mm256_mul_pd(mu_a, mu_a));
    const __m256d var_b = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(sbb + i), inv), _mm256_mul_pd(mu_b, mu_b));
    const __m256d cov = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(sab + i), inv), _mm256_mul_pd(mu_a, mu_b));
    const __m256d num = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(_mm256_mul_pd(two, mu_a), mu_b), vc1),
                                      _mm256_add_pd(_mm256_mul_pd(two, cov), vc2));
    const __m256d den =
        _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(mu_a, mu_a), _mm256_mul_pd(mu_b, mu_b)), vc1),
                      _mm256_add_pd(_mm256_add_pd(var_a, var_b), vc2));
    _mm256_storeu_pd(out + i, _mm256_div_pd(num, den));
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

constexpr KernelTable kAvx2{
    Isa::Avx2, "avx2", rgb_to_gray, abs_diff_u8, weighted_sum, magnitude, multiply, masked_sum, masked_sq_dev,
    ssim_map,
};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace fftg::simd

#else

namespace fftg::simd {
const KernelTable* avx2_kernels() { return nullptr; }
}  // namespace fftg::simd

#endif
