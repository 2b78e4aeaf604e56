#include "doctest.h"
#include "fftg/annotate.hpp"

using namespace fftg;

namespace {

TypeEvidence triggered(ForgeryType t, bool on = true) {
  TypeEvidence ev;
  ev.type = t;
  ev.triggered = on;
  return ev;
}

TypeEvidence blend_with(double g, double e, double f) {
  TypeEvidence ev = triggered(ForgeryType::BlendBoundary);
  ev.metrics = {{"gradient_hit", g}, {"edge_hit", e}, {"frequency_hit", f}};
  return ev;
}

}  // namespace

TEST_CASE("connective phrase table") {
  CHECK(phrase_for(RegionName::Mouth, ForgeryType::TextureAbnormal) == "the mouth lacks natural texture");
  CHECK(phrase_for(RegionName::Eyes, ForgeryType::Blur) == "the eyes appears blurry compared to natural faces");
  CHECK(phrase_for(RegionName::Face, ForgeryType::ColorDifference) == "the face has inconsistent colors");
  CHECK(phrase_for(RegionName::Nose, ForgeryType::StructureAbnormal) ==
        "the nose shows structural distortion deviating from natural appearance");
  CHECK(phrase_for("mouth", "TextureAbnormal") == "the mouth lacks natural texture");
  CHECK_THROWS_AS(phrase_for("mouth", "Sharpen"), Error);
  CHECK_THROWS_AS(phrase_for("ear", "Blur"), Error);
  try {
    phrase_for("nose", "Halo");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownType);
  }
}

TEST_CASE("blend phrase lists exactly the triggered clauses") {
  const std::string g = "sharp changes in image gradients at the boundaries";
  const std::string e = "unnatural edge patterns";
  const std::string f = "unusual frequency patterns at the boundaries";
  const std::string head = "the nose shows blending artifacts characterized by ";
  CHECK(phrase_for(RegionName::Nose, blend_with(1, 0, 0)) == head + g);
  CHECK(phrase_for(RegionName::Nose, blend_with(0, 1, 1)) == head + e + " and " + f);
  CHECK(phrase_for(RegionName::Nose, blend_with(1, 1, 1)) == head + g + ", " + e + " and " + f);
  // Blend evidence implied by a blend step carries no metrics.
  CHECK(phrase_for(RegionName::Nose, triggered(ForgeryType::BlendBoundary)) == "the nose shows blending artifacts");
}

TEST_CASE("raw annotation rendering") {
  const RawAnnotation real = build_raw_annotation({}, {}, Label::Real);
  CHECK(real.full_text == "This is a real face.");
  CHECK(real.statements.empty());
  CHECK_FALSE(real.low_evidence);

  const ForgeryRegionList one = {{RegionName::Mouth, 0.3}};
  const RawAnnotation mouth =
      build_raw_annotation(one, {{triggered(ForgeryType::TextureAbnormal), triggered(ForgeryType::Blur, false)}}, Label::Fake);
  CHECK(mouth.full_text == "This is a fake face, the mouth lacks natural texture.");
  REQUIRE(mouth.statements.size() == 1u);
  CHECK(mouth.statements[0].type == ForgeryType::TextureAbnormal);

  // Region-major, fixed type order regardless of evidence order.
  const ForgeryRegionList two = {{RegionName::Eyes, 0.4}, {RegionName::Nose, 0.2}};
  const std::vector<std::vector<TypeEvidence>> ev = {
      {triggered(ForgeryType::StructureAbnormal), triggered(ForgeryType::ColorDifference)},
      {triggered(ForgeryType::Blur)}};
  const RawAnnotation both = build_raw_annotation(two, ev, Label::Fake);
  CHECK(both.full_text ==
        "This is a fake face, the eyes has inconsistent colors; the eyes shows structural distortion deviating from "
        "natural appearance; the nose appears blurry compared to natural faces.");
  CHECK(build_raw_annotation(two, ev, Label::Fake) == both);

  const RawAnnotation person = build_raw_annotation(one, {{triggered(ForgeryType::Blur)}}, Label::Fake, Subject::Person);
  CHECK(person.full_text.rfind("This is a fake person, ", 0) == 0);
}

TEST_CASE("fake label without triggered evidence is flagged, not rejected") {
  const ForgeryRegionList one = {{RegionName::Face, 0.1}};
  const RawAnnotation r = build_raw_annotation(one, {{triggered(ForgeryType::Blur, false)}}, Label::Fake);
  CHECK(r.low_evidence);
  CHECK(r.full_text == "This is a fake face.");
  CHECK_THROWS_AS(build_raw_annotation(one, {}, Label::Fake), Error);
}

TEST_CASE("label and subject names") {
  CHECK(mandatory_phrase(Label::Fake) == "This is a fake face");
  CHECK(mandatory_phrase(Label::Real, Subject::Person) == "This is a real person");
  CHECK(parse_label("fake") == Label::Fake);
  CHECK_FALSE(parse_label("FAKE").has_value());
}
