#pragma once

// Data-parallel inner loops behind the vision kernels.
//
// Every table computes bit-identical results: lane-parallel variants perform
// the same IEEE operations in the same order as the scalar reference, and
// reductions are striped over four lanes in every implementation. The
// equivalence tests hold every table to exact equality with the scalar one.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace fftg::simd {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  std::string_view name;

  // out[i] = (299 R + 587 G + 114 B) / 1000 over interleaved RGB pixels.
  void (*rgb_to_gray)(const std::uint8_t* rgb, double* out, std::size_t pixels);

  // out[i] = |a[i] - b[i]| over bytes.
  void (*abs_diff_u8)(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n);

  // out[i] = w[0]*src[0][i] + w[1]*src[1][i] + ..., accumulated left to right.
  void (*weighted_sum)(const double* const* sources, const double* weights, std::size_t taps, double* out,
                       std::size_t n);

  // out[i] = sqrt(a[i]^2 + b[i]^2)
  void (*magnitude)(const double* a, const double* b, double* out, std::size_t n);

  // out[i] = a[i] * b[i]
  void (*multiply)(const double* a, const double* b, double* out, std::size_t n);

  // Sum of v[i] where mask[i] != 0.
  double (*masked_sum)(const double* v, const std::uint8_t* mask, std::size_t n);

  // Sum of (v[i] - center)^2 where mask[i] != 0.
  double (*masked_sq_dev)(const double* v, const std::uint8_t* mask, double center, std::size_t n);

  // Per-window SSIM from window sums of a, b, a*a, b*b, a*b.
  void (*ssim_map)(const double* sa, const double* sb, const double* saa, const double* sbb, const double* sab,
                   double inv_count, double c1, double c2, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// Null when the variant is not compiled into this build.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// Every table that is both compiled in and supported by the running CPU,
// scalar first.
std::vector<const KernelTable*> available_kernels();

// Widest supported table, chosen once. FFTG_SIMD=scalar|avx2|neon overrides.
const KernelTable& active_kernels();

}  // namespace fftg::simd
