#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fftg/image.hpp"

namespace fftg::io {

// Any PNG libpng can read is converted to 8-bit RGB.
RgbImage read_png_rgb(const std::filesystem::path& path);
GrayImage read_png_gray(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const RgbImage& img);
// Values are serialized as round(v) clamped to [0,255].
void write_png(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> encode_png(const RgbImage& img);

}  // namespace fftg::io
