#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fftg/annotate.hpp"
#include "fftg/detectors.hpp"
#include "fftg/image.hpp"

namespace fftg {

// Fake on the left, real on the right, with an 8 px mid-gray column between.
// A fake of different height is resized (nearest neighbour, aspect kept) to
// the real image's height.
inline constexpr int kSeparatorWidth = 8;
inline constexpr std::uint8_t kSeparatorGray = 128;
RgbImage build_visual_prompt(const RgbImage& real, const RgbImage& fake);

// Nearest-neighbour resample; source pixel = floor((dst + 0.5) * src / dst_extent).
RgbImage resize_nearest(const RgbImage& img, int width, int height);

struct PromptBundle {
  RgbImage visual;
  std::string guide;
  std::string task;
  std::string predefined;
  std::string raw_text;
  Label label = Label::Real;
  Subject subject = Subject::Face;
  int k = 1;
};

// Captions requested by default for each label.
int default_caption_count(Label label);

PromptBundle build_prompt_bundle(const RawAnnotation& raw, std::span<const TypeEvidence> evidence, int k,
                                 RgbImage visual = {}, Subject subject = Subject::Face);

// Extracts the first JSON object in `body` (code fences and prose around it
// are ignored), then checks is_fake against the label, the caption count and
// the mandatory phrase. Throws SchemaError whose message starts with one of:
// no_json_object, missing_is_fake, label_mismatch, missing_captions,
// caption_not_string, caption_count, missing_phrase.
std::vector<std::string> parse_and_validate_response(std::string_view body, Label label, int k,
                                                     Subject subject = Subject::Face);

// Machine-readable reason carried by a SchemaError from the validator.
std::string schema_reason(const Error& e);

struct ServiceConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  std::string credential;  // filled from FFTG_API_KEY
  double timeout_seconds = 60.0;
  int retries = 3;
  int backoff_ms = 500;  // first delay; doubles per retry
  int max_concurrent = 4;

  void validate() const;
  // Reads FFTG_API_KEY into `credential` when set.
  ServiceConfig& with_env_credential();
};

enum class CaptionSource { Remote, FallbackRaw };
std::string_view to_string(CaptionSource s);

struct RefinedAnnotation {
  std::vector<std::string> captions;
  CaptionSource source = CaptionSource::FallbackRaw;
  std::string model_id;
  std::string request_digest;  // SHA-256 of the first request body
  std::string failure;         // empty on success, otherwise what forced the fallback
  int attempts = 0;            // HTTP requests sent
};

// Chat-completions request body for a bundle; deterministic for a given bundle and model.
std::string build_request_body(const PromptBundle& bundle, std::string_view model);

// Thread-safe; at most cfg.max_concurrent requests in flight across all callers.
class RefineClient {
 public:
  explicit RefineClient(ServiceConfig cfg);
  ~RefineClient();
  RefineClient(const RefineClient&) = delete;
  RefineClient& operator=(const RefineClient&) = delete;

  // Never throws; any failure yields source = FallbackRaw with captions = [raw_text].
  RefinedAnnotation refine(const PromptBundle& bundle) noexcept;

  const ServiceConfig& config() const { return cfg_; }

 private:
  struct Impl;
  ServiceConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience over a private client.
RefinedAnnotation refine_annotation(const PromptBundle& bundle, const ServiceConfig& cfg) noexcept;

}  // namespace fftg
