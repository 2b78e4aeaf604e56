#include "fftg/detectors.hpp"

#include <cmath>

#include "fftg/vision.hpp"

namespace fftg {

std::string_view to_string(ForgeryType t) {
  switch (t) {
    case ForgeryType::ColorDifference: return "ColorDifference";
    case ForgeryType::Blur: return "Blur";
    case ForgeryType::StructureAbnormal: return "StructureAbnormal";
    case ForgeryType::TextureAbnormal: return "TextureAbnormal";
    case ForgeryType::BlendBoundary: return "BlendBoundary";
  }
  return "Unknown";
}

std::optional<ForgeryType> parse_forgery_type(std::string_view name) {
  for (ForgeryType t : kTypeOrder) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

void DetectorThresholds::validate() const {
  const double all[] = {color_mean, color_std, blur_variance, ssim, texture, blend_gradient,
                        blend_edge, blend_frequency, canny_low, canny_high, dct_low_fraction};
  for (double v : all) {
    if (!(v >= 0.0)) throw Error(ErrorCode::Config, "detector thresholds must be non-negative");
  }
  if (!(ssim > 0.0 && ssim <= 1.0)) throw Error(ErrorCode::Config, "ssim threshold must lie in (0,1]");
  if (boundary_width < 1) throw Error(ErrorCode::Config, "boundary width must be at least 1");
  if (canny_low > canny_high) throw Error(ErrorCode::Config, "canny low threshold exceeds high threshold");
  if (!(canny_sigma > 0.0)) throw Error(ErrorCode::Config, "canny sigma must be positive");
}

std::optional<double> TypeEvidence::metric(std::string_view name) const {
  for (const Metric& m : metrics) {
    if (m.name == name) return m.value;
  }
  return std::nullopt;
}

bool color_rule(double m, double s, const DetectorThresholds& th) { return m > th.color_mean && s > th.color_std; }

bool blur_rule(double real_var, double fake_var, const DetectorThresholds& th) {
  return real_var > fake_var && (real_var - fake_var) > th.blur_variance;
}

bool structure_rule(double ssim, const DetectorThresholds& th) { return ssim < th.ssim; }

bool texture_rule(double contrast_real, double contrast_fake, const DetectorThresholds& th) {
  return contrast_real > contrast_fake && (contrast_real - contrast_fake) > th.texture;
}

int blend_evidence(double s_g, double s_e, double s_f, const DetectorThresholds& th) {
  return (s_g > th.blend_gradient ? 1 : 0) + (s_e > th.blend_edge ? 1 : 0) + (s_f > th.blend_frequency ? 1 : 0);
}

bool blend_rule(int evidence) { return evidence >= 2; }

bool recompute_trigger(const TypeEvidence& ev, const DetectorThresholds& th) {
  if (ev.note) return false;
  auto get = [&](std::string_view n) {
    const auto v = ev.metric(n);
    if (!v) throw Error(ErrorCode::InvalidArgument, "evidence lacks metric " + std::string(n));
    return *v;
  };
  switch (ev.type) {
    case ForgeryType::ColorDifference: return color_rule(get("m"), get("s"), th);
    case ForgeryType::Blur: return blur_rule(get("r_var"), get("f_var"), th);
    case ForgeryType::StructureAbnormal: return structure_rule(get("ssim"), th);
    case ForgeryType::TextureAbnormal: return texture_rule(get("cd_real"), get("cd_fake"), th);
    case ForgeryType::BlendBoundary: return blend_rule(blend_evidence(get("s_g"), get("s_e"), get("s_f"), th));
  }
  return false;
}

TypeEvidence detect_color_difference(const LabImage& real, const LabImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th) {
  require_same_size(real.size(), fake.size(), "color difference images");
  require_same_size(real.size(), region.size(), "color difference region");
  if (region.none()) throw Error(ErrorCode::EmptyRegion, "color difference over an empty region");

  const std::size_t n = real.size().area();
  std::vector<double> plane_r(n), plane_f(n);
  double mean_sum = 0.0, std_sum = 0.0;
  TypeEvidence ev;
  ev.type = ForgeryType::ColorDifference;
  static constexpr const char* channel[3] = {"L", "a", "b"};
  double per_mean[3], per_std[3];
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      plane_r[i] = real.data()[3 * i + c];
      plane_f[i] = fake.data()[3 * i + c];
    }
    const auto sr = vision::masked_stats(plane_r, region);
    const auto sf = vision::masked_stats(plane_f, region);
    per_mean[c] = std::abs(sr.mean - sf.mean);
    per_std[c] = std::abs(std::sqrt(sr.variance) - std::sqrt(sf.variance));
    mean_sum += per_mean[c];
    std_sum += per_std[c];
  }
  const double m = mean_sum / 3.0;
  const double s = std_sum / 3.0;
  ev.metrics = {{"m", m}, {"s", s}};
  for (int c = 0; c < 3; ++c) ev.metrics.push_back({std::string(channel[c]) + "_m", per_mean[c]});
  for (int c = 0; c < 3; ++c) ev.metrics.push_back({std::string(channel[c]) + "_s", per_std[c]});
  ev.triggered = color_rule(m, s, th);
  return ev;
}

TypeEvidence detect_color_difference(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th) {
  return detect_color_difference(vision::rgb_to_lab(real), vision::rgb_to_lab(fake), region, th);
}

TypeEvidence detect_blur(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                         const DetectorThresholds& th) {
  require_same_size(real.size(), fake.size(), "blur images");
  const double r_var = vision::laplacian_variance(real, region);
  const double f_var = vision::laplacian_variance(fake, region);
  return {ForgeryType::Blur, blur_rule(r_var, f_var, th), {{"r_var", r_var}, {"f_var", f_var}}, std::nullopt};
}

TypeEvidence detect_structure_abnormal(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                                       const DetectorThresholds& th) {
  const double s = vision::ssim(real, fake, region);
  return {ForgeryType::StructureAbnormal, structure_rule(s, th), {{"ssim", s}}, std::nullopt};
}

TypeEvidence detect_texture_abnormal(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th) {
  require_same_size(real.size(), fake.size(), "texture images");
  const double cr = vision::glcm_contrast(real, region);
  const double cf = vision::glcm_contrast(fake, region);
  return {ForgeryType::TextureAbnormal, texture_rule(cr, cf, th), {{"cd_real", cr}, {"cd_fake", cf}}, std::nullopt};
}

TypeEvidence detect_blend_boundary(const GrayImage& image, const PixelSet& mask, const DetectorThresholds& th) {
  require_same_size(image.size(), mask.size(), "blend boundary");
  if (mask.none()) throw Error(ErrorCode::EmptyRegion, "blend boundary mask is empty");

  const PixelSet inner = mask - vision::erode(mask, th.boundary_width);
  const PixelSet outer = vision::dilate(mask, th.boundary_width) - mask;
  if (inner.none() || outer.none()) throw Error(ErrorCode::EmptyBoundary, "blend boundary band is empty");
  const PixelSet band = inner | outer;

  const GrayImage grad = vision::sobel_magnitude(image);
  const double s_g = std::abs(vision::masked_stats(grad.data(), inner).mean - vision::masked_stats(grad.data(), outer).mean);

  const PixelSet edges = vision::canny(image, th.canny_low, th.canny_high, th.canny_sigma);
  const double s_e = static_cast<double>((edges & band).count()) / static_cast<double>(band.count());

  const double s_f = vision::dct_band_ratio(image, band, th.dct_low_fraction);

  const int evidence = blend_evidence(s_g, s_e, s_f, th);
  TypeEvidence ev{ForgeryType::BlendBoundary, blend_rule(evidence), {}, std::nullopt};
  ev.metrics = {{"s_g", s_g},
                {"s_e", s_e},
                {"s_f", s_f},
                {"evidence", static_cast<double>(evidence)},
                {"gradient_hit", s_g > th.blend_gradient ? 1.0 : 0.0},
                {"edge_hit", s_e > th.blend_edge ? 1.0 : 0.0},
                {"frequency_hit", s_f > th.blend_frequency ? 1.0 : 0.0}};
  return ev;
}

PairViews::PairViews(const RgbImage& r, const RgbImage& f)
    : real(&r),
      fake(&f),
      real_gray(vision::to_grayscale(r)),
      fake_gray(vision::to_grayscale(f)),
      real_lab(vision::rgb_to_lab(r)),
      fake_lab(vision::rgb_to_lab(f)) {
  require_same_size(r.size(), f.size(), "image pair");
}

std::vector<TypeEvidence> decide_types(const PairViews& pair, const PixelSet& region, const ForgeryMask& mask,
                                       const DetectorThresholds& th) {
  std::vector<TypeEvidence> out;
  out.reserve(kTypeOrder.size());
  auto guarded = [&](ForgeryType type, auto&& run) {
    try {
      out.push_back(run());
    } catch (const Error& e) {
      out.push_back({type, false, {}, std::string(e.what())});
    }
  };
  guarded(ForgeryType::ColorDifference,
          [&] { return detect_color_difference(pair.real_lab, pair.fake_lab, region, th); });
  guarded(ForgeryType::Blur, [&] { return detect_blur(pair.real_gray, pair.fake_gray, region, th); });
  guarded(ForgeryType::StructureAbnormal,
          [&] { return detect_structure_abnormal(pair.real_gray, pair.fake_gray, region, th); });
  guarded(ForgeryType::TextureAbnormal,
          [&] { return detect_texture_abnormal(pair.real_gray, pair.fake_gray, region, th); });
  guarded(ForgeryType::BlendBoundary, [&] {
    const double peak = mask.max();
    if (!(peak > 0.0)) throw Error(ErrorCode::EmptyRegion, "forgery mask is all zero");
    return detect_blend_boundary(pair.fake_gray, mask.threshold(0.5 * peak) & region, th);
  });
  return out;
}

}  // namespace fftg
