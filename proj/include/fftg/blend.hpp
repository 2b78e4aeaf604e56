#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "fftg/detectors.hpp"
#include "fftg/image.hpp"

namespace fftg {

struct BlendConfig {
  double alpha = 0.9;
  double alpha_probability = 0.5;  // draws p <= this take the alpha branch
  double solver_tolerance = 1e-5;
  int max_iterations = 10000;

  void validate() const;
};

enum class BlendKind { Alpha, Poisson };
std::string_view to_string(BlendKind k);

// Inside region: round(alpha*fake + (1-alpha)*real) per channel; outside: real.
RgbImage alpha_blend(const RgbImage& real, const RgbImage& fake, const PixelSet& region, double alpha);

struct PoissonSolution {
  // Unrounded solution per channel over the whole frame; equals real outside the region.
  std::array<std::vector<double>, 3> channels;
  RgbImage image;
  int iterations = 0;
  double residual = 0.0;  // max |4u_p - sum u_q - (4f_p - sum f_q)| over region pixels
  bool converged = false;
};

// Gauss-Seidel solve of lap(u) = lap(fake) on the region, u = real outside it.
// The region may not touch the frame border and must survive a 1-pixel erosion.
PoissonSolution poisson_blend(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                              const BlendConfig& cfg);

// Uniform draw in (0,1) from a seed; both endpoints excluded.
double blend_draw(std::uint64_t seed);

struct MixedForgery {
  RgbImage image;
  BlendKind kind;
  double draw = 0.0;
  std::vector<ForgeryType> implied_types;
  bool converged = true;
};

MixedForgery make_mixed_forgery(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                                const BlendConfig& cfg, std::uint64_t seed);

}  // namespace fftg
