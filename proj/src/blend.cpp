#include "fftg/blend.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fftg/vision.hpp"

namespace fftg {

void BlendConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::Config, "blend alpha must lie in [0,1]");
  if (!(alpha_probability >= 0.0 && alpha_probability <= 1.0)) {
    throw Error(ErrorCode::Config, "blend probability threshold must lie in [0,1]");
  }
  if (!(solver_tolerance > 0.0)) throw Error(ErrorCode::Config, "solver tolerance must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::Config, "solver needs at least one iteration");
}

std::string_view to_string(BlendKind k) { return k == BlendKind::Alpha ? "alpha" : "poisson"; }

namespace {

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0)); }

}  // namespace

RgbImage alpha_blend(const RgbImage& real, const RgbImage& fake, const PixelSet& region, double alpha) {
  require_same_size(real.size(), fake.size(), "alpha_blend images");
  require_same_size(real.size(), region.size(), "alpha_blend region");
  RgbImage out = real;
  for (int y = 0; y < real.height(); ++y) {
    for (int x = 0; x < real.width(); ++x) {
      if (!region.test(x, y)) continue;
      const std::uint8_t* r = real.pixel(x, y);
      const std::uint8_t* f = fake.pixel(x, y);
      std::uint8_t* o = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) o[c] = to_byte(alpha * f[c] + (1.0 - alpha) * r[c]);
    }
  }
  return out;
}

PoissonSolution poisson_blend(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                              const BlendConfig& cfg) {
  require_same_size(real.size(), fake.size(), "poisson_blend images");
  require_same_size(real.size(), region.size(), "poisson_blend region");
  const int w = real.width(), h = real.height();
  for (int x = 0; x < w; ++x) {
    if (region.test(x, 0) || region.test(x, h - 1)) throw Error(ErrorCode::RegionTouchesBorder, "region touches frame border");
  }
  for (int y = 0; y < h; ++y) {
    if (region.test(0, y) || region.test(w - 1, y)) throw Error(ErrorCode::RegionTouchesBorder, "region touches frame border");
  }
  if (vision::erode(region, 1).none()) throw Error(ErrorCode::InvalidArgument, "poisson region has no interior");

  std::vector<std::size_t> inside;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (region.test(x, y)) inside.push_back(static_cast<std::size_t>(y) * w + x);
    }
  }
  const std::size_t n = real.size().area();
  const std::ptrdiff_t offsets[4] = {-1, 1, -static_cast<std::ptrdiff_t>(w), static_cast<std::ptrdiff_t>(w)};

  PoissonSolution sol;
  sol.converged = true;
  sol.image = real;
  std::vector<double> source(inside.size());
  for (int c = 0; c < 3; ++c) {
    std::vector<double> f(n), u(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = fake.data()[3 * i + c];
      u[i] = real.data()[3 * i + c];
    }

    // Source term 4f_p - sum f_q, and a starting guess of fake shifted by the
    // mean real-minus-fake offset along the Dirichlet boundary.
    double offset_sum = 0.0;
    std::size_t offset_count = 0;
    for (std::size_t k = 0; k < inside.size(); ++k) {
      const std::size_t p = inside[k];
      double s = 4.0 * f[p];
      for (std::ptrdiff_t o : offsets) {
        const std::size_t q = p + o;
        s -= f[q];
        if (!region.bytes()[q]) {
          offset_sum += u[q] - f[q];
          ++offset_count;
        }
      }
      source[k] = s;
    }
    const double offset = offset_count ? offset_sum / static_cast<double>(offset_count) : 0.0;
    for (std::size_t p : inside) u[p] = f[p] + offset;

    auto max_residual = [&] {
      double worst = 0.0;
      for (std::size_t k = 0; k < inside.size(); ++k) {
        const std::size_t p = inside[k];
        const double r = 4.0 * u[p] - (u[p - 1] + u[p + 1] + u[p - w] + u[p + w]) - source[k];
        worst = std::max(worst, std::abs(r));
      }
      return worst;
    };

    constexpr int check_every = 8;
    int iter = 0;
    double residual = max_residual();
    while (residual >= cfg.solver_tolerance && iter < cfg.max_iterations) {
      const int sweeps = std::min(check_every, cfg.max_iterations - iter);
      for (int s = 0; s < sweeps; ++s) {
        for (std::size_t k = 0; k < inside.size(); ++k) {
          const std::size_t p = inside[k];
          u[p] = (u[p - 1] + u[p + 1] + u[p - w] + u[p + w] + source[k]) * 0.25;
        }
      }
      iter += sweeps;
      residual = max_residual();
    }
    sol.iterations = std::max(sol.iterations, iter);
    sol.residual = std::max(sol.residual, residual);
    if (residual >= cfg.solver_tolerance) sol.converged = false;

    for (std::size_t p : inside) sol.image.data()[3 * p + c] = to_byte(u[p]);
    sol.channels[c] = std::move(u);
  }
  return sol;
}

double blend_draw(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

MixedForgery make_mixed_forgery(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                                const BlendConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  MixedForgery out;
  out.draw = blend_draw(seed);
  if (out.draw <= cfg.alpha_probability) {
    out.kind = BlendKind::Alpha;
    out.image = alpha_blend(real, fake, region, cfg.alpha);
    out.implied_types = {ForgeryType::BlendBoundary};
  } else {
    out.kind = BlendKind::Poisson;
    PoissonSolution sol = poisson_blend(real, fake, region, cfg);
    out.converged = sol.converged;
    out.image = std::move(sol.image);
  }
  return out;
}

}  // namespace fftg
