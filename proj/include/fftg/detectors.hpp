#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fftg/image.hpp"
#include "fftg/region.hpp"

namespace fftg {

enum class ForgeryType { ColorDifference, Blur, StructureAbnormal, TextureAbnormal, BlendBoundary };

inline constexpr std::array<ForgeryType, 5> kTypeOrder = {ForgeryType::ColorDifference, ForgeryType::Blur,
                                                          ForgeryType::StructureAbnormal, ForgeryType::TextureAbnormal,
                                                          ForgeryType::BlendBoundary};

std::string_view to_string(ForgeryType t);
std::optional<ForgeryType> parse_forgery_type(std::string_view name);

struct DetectorThresholds {
  double color_mean = 1.0;
  double color_std = 0.5;
  double blur_variance = 100.0;
  double ssim = 0.97;
  double texture = 0.7;
  double blend_gradient = 15.0;
  double blend_edge = 0.10;
  double blend_frequency = 0.5;

  // Kernel parameters used by the blend-boundary check.
  int boundary_width = 5;
  double canny_low = 40.0;
  double canny_high = 100.0;
  double canny_sigma = 1.4;
  double dct_low_fraction = 0.25;

  void validate() const;
};

struct Metric {
  std::string name;
  double value;

  friend bool operator==(const Metric&, const Metric&) = default;
};

struct TypeEvidence {
  ForgeryType type;
  bool triggered = false;
  std::vector<Metric> metrics;
  std::optional<std::string> note;  // set when the detector could not run

  std::optional<double> metric(std::string_view name) const;

  friend bool operator==(const TypeEvidence&, const TypeEvidence&) = default;
};

// Decision rules, applied to already-computed metrics. Strict inequalities throughout.
bool color_rule(double m, double s, const DetectorThresholds& th);
bool blur_rule(double real_var, double fake_var, const DetectorThresholds& th);
bool structure_rule(double ssim, const DetectorThresholds& th);
bool texture_rule(double contrast_real, double contrast_fake, const DetectorThresholds& th);
int blend_evidence(double s_g, double s_e, double s_f, const DetectorThresholds& th);
bool blend_rule(int evidence);

// Recomputes `triggered` from the recorded metrics. Evidence carrying a note
// (detector failure) is never triggered.
bool recompute_trigger(const TypeEvidence& ev, const DetectorThresholds& th);

TypeEvidence detect_color_difference(const RgbImage& real, const RgbImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th);
TypeEvidence detect_color_difference(const LabImage& real, const LabImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th);
TypeEvidence detect_blur(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                         const DetectorThresholds& th);
TypeEvidence detect_structure_abnormal(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                                       const DetectorThresholds& th);
TypeEvidence detect_texture_abnormal(const GrayImage& real, const GrayImage& fake, const PixelSet& region,
                                     const DetectorThresholds& th);
// Bands: inner = mask - erode(mask, w), outer = dilate(mask, w) - mask.
TypeEvidence detect_blend_boundary(const GrayImage& image, const PixelSet& mask, const DetectorThresholds& th);

// Derived views of a real/fake pair, computed once and shared across regions.
struct PairViews {
  const RgbImage* real = nullptr;
  const RgbImage* fake = nullptr;
  GrayImage real_gray, fake_gray;
  LabImage real_lab, fake_lab;

  PairViews(const RgbImage& real, const RgbImage& fake);
};

// Runs all five detectors on one region, in kTypeOrder. The blend-boundary
// check uses the fake image and the mask binarized at 0.5*max, restricted to
// the region. Detector errors become untriggered evidence with a note.
std::vector<TypeEvidence> decide_types(const PairViews& pair, const PixelSet& region, const ForgeryMask& mask,
                                       const DetectorThresholds& th);

}  // namespace fftg
