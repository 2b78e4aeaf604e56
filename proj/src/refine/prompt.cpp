#include <algorithm>
#include <cstring>
#include <set>

#include "fftg/refine.hpp"

namespace fftg {

RgbImage resize_nearest(const RgbImage& img, int width, int height) {
  if (width <= 0 || height <= 0 || img.empty()) throw Error(ErrorCode::InvalidArgument, "resize to an empty frame");
  RgbImage out(width, height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min(img.height() - 1, static_cast<int>((2LL * y + 1) * img.height() / (2LL * height)));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min(img.width() - 1, static_cast<int>((2LL * x + 1) * img.width() / (2LL * width)));
      std::memcpy(out.pixel(x, y), img.pixel(sx, sy), 3);
    }
  }
  return out;
}

RgbImage build_visual_prompt(const RgbImage& real, const RgbImage& fake) {
  if (real.empty() || fake.empty()) throw Error(ErrorCode::InvalidArgument, "visual prompt needs two images");
  RgbImage left = fake;
  if (fake.height() != real.height()) {
    const long long w = (static_cast<long long>(fake.width()) * real.height() + fake.height() / 2) / fake.height();
    left = resize_nearest(fake, static_cast<int>(std::max(1LL, w)), real.height());
  }
  const int h = real.height();
  RgbImage out(left.width() + kSeparatorWidth + real.width(), h, kSeparatorGray);
  for (int y = 0; y < h; ++y) {
    std::memcpy(out.pixel(0, y), left.pixel(0, y), static_cast<std::size_t>(left.width()) * 3);
    std::memcpy(out.pixel(left.width() + kSeparatorWidth, y), real.pixel(0, y), static_cast<std::size_t>(real.width()) * 3);
  }
  return out;
}

int default_caption_count(Label label) { return label == Label::Fake ? 3 : 1; }

namespace {

std::string derivation_line(ForgeryType type) {
  switch (type) {
    case ForgeryType::ColorDifference:
      return "- Color difference: the region was converted to CIELAB and the mean and standard deviation of each "
             "channel were compared between the two images; both the mean gap and the spread gap exceeded their "
             "limits.";
    case ForgeryType::Blur:
      return "- Blur: the variance of the Laplacian response inside the region was clearly lower in the forged image "
             "than in the real one, indicating lost high-frequency detail.";
    case ForgeryType::StructureAbnormal:
      return "- Structure abnormality: an SSIM comparison of the region between the two images fell below the "
             "similarity limit.";
    case ForgeryType::TextureAbnormal:
      return "- Texture abnormality: GLCM analysis showed the forged region's contrast clearly below the real "
             "region's, indicating smoothed texture.";
    case ForgeryType::BlendBoundary:
      return "- Blending boundary: a band around the region's edge was checked for gradient jumps (Sobel), "
             "edge density (Canny) and high-frequency energy (DCT); at least two of these exceeded their limits.";
  }
  return {};
}

}  // namespace

PromptBundle build_prompt_bundle(const RawAnnotation& raw, std::span<const TypeEvidence> evidence, int k,
                                 RgbImage visual, Subject subject) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "caption count must be at least 1");
  PromptBundle b;
  b.visual = std::move(visual);
  b.raw_text = raw.full_text;
  b.label = raw.label;
  b.subject = subject;
  b.k = k;
  const std::string noun(to_string(subject));
  const std::string phrase = mandatory_phrase(raw.label, subject);

  std::set<ForgeryType> triggered;
  for (const TypeEvidence& ev : evidence) {
    if (ev.triggered) triggered.insert(ev.type);
  }
  for (const Statement& s : raw.statements) triggered.insert(s.type);

  b.guide = "Raw annotation:\n" + raw.full_text + "\n\n";
  b.guide += "The image shows two " + noun +
             "s side by side. The LEFT image is the forged one; the RIGHT image is the real reference. ";
  b.guide += "The raw annotation was produced by subtracting the two images pixel by pixel, averaging the "
             "difference inside the mouth, nose, eyes and face areas located by facial landmarks, and analysing "
             "every area whose average difference exceeded a threshold.\n";
  if (raw.label == Label::Real || triggered.empty()) {
    b.guide += raw.label == Label::Real ? "The image pair showed no triggered artifacts: no area differed enough to be "
                                          "flagged.\n"
                                        : "The image pair showed no triggered artifacts inside the flagged areas.\n";
  } else {
    b.guide += "How each forgery type was determined:\n";
    for (ForgeryType t : kTypeOrder) {
      if (triggered.count(t)) b.guide += derivation_line(t) + "\n";
    }
  }

  b.task = "You are an expert in face forgery analysis. Compare the LEFT (forged) and RIGHT (real) images step by "
           "step:\n"
           "1. Look at each facial area in turn: eyes, nose, mouth, and the rest of the face.\n"
           "2. For every area named in the raw annotation, check the described artifact against what you see.\n"
           "3. Describe only artifacts that the raw annotation supports; do not introduce new areas.\n"
           "4. Write natural, varied captions that keep every area and artifact type from the raw annotation.\n";

  b.predefined = "Output format: reply with a single JSON object and nothing else, matching this schema:\n"
                 "{\"is_fake\": <true|false>, \"captions\": [<" +
                 std::to_string(k) + " strings>]}\n" + "\"is_fake\" must be " +
                 (raw.label == Label::Fake ? "true" : "false") + ". Provide exactly " + std::to_string(k) +
                 (k == 1 ? " caption" : " captions") + ". Every caption must contain the exact phrase \"" + phrase +
                 "\".\n";
  return b;
}

}  // namespace fftg
