#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fftg/image.hpp"
#include "fftg/region.hpp"

// Procedural faces for tests and fixtures: a textured face drawn around a
// 68-point template, and localized edits confined to one landmark region.
namespace fftg::synthetic {

enum class Edit { ColorShift, Blur, Warp, Paste, Flatten };
std::string_view to_string(Edit e);

// Template landmarks for a w x h frame, jittered by up to `jitter` pixels.
Landmarks template_landmarks(int width, int height, std::uint64_t seed, double jitter = 2.0);

// Skin, features and per-pixel noise texture.
RgbImage render_face(const Landmarks& lms, int width, int height, std::uint64_t seed);

// Rewrites only the pixels of `region`. Paste copies from `donor`.
RgbImage apply_edit(const RgbImage& img, const PixelSet& region, Edit edit, const RgbImage& donor);

struct Pair {
  RgbImage real;
  RgbImage fake;
  Landmarks landmarks;
  std::vector<std::pair<RegionName, Edit>> edits;  // empty: fake == real
};

// `edited_regions` = 0 gives an identical pair; otherwise that many distinct
// regions (1..4) get a random edit.
Pair make_pair(std::uint64_t seed, int width = 128, int height = 128, int edited_regions = -1);

// Writes real/<id>.png, fake/<method>/<id>.png and landmarks/<id>.json.
void write_pair(const std::filesystem::path& root, const std::string& method, const std::string& id, const Pair& p);

}  // namespace fftg::synthetic
