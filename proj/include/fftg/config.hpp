#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "fftg/annotate.hpp"
#include "fftg/blend.hpp"
#include "fftg/detectors.hpp"
#include "fftg/evaluate.hpp"
#include "fftg/refine.hpp"

namespace fftg {

struct PipelineConfig {
  std::uint64_t seed = 0;
  double region_theta = 0.05;
  int eye_dilation = 4;
  DetectorThresholds detectors;
  bool blend_enabled = false;
  BlendConfig blend;
  int captions_fake = 3;
  int captions_real = 1;
  Subject subject = Subject::Face;
  bool refine_enabled = false;
  ServiceConfig service;  // credential never serialized
  Averaging averaging = Averaging::Micro;
  std::string lexicon_path;  // empty: built-in lexicon

  void validate() const;

  // `key = value` lines; '#' starts a comment. Unknown keys and malformed
  // values throw Config. Keys not given keep their defaults.
  static PipelineConfig parse(std::string_view text);
  static PipelineConfig load(const std::filesystem::path& path);
  void set(std::string_view key, std::string_view value);

  // Every key, fixed order, one `key = value` per line.
  std::string canonical() const;
  // SHA-256 of canonical().
  std::string digest() const;
};

}  // namespace fftg
