#include <cmath>

#include "doctest.h"
#include "fftg/detectors.hpp"
#include "fftg/vision.hpp"
#include "oracles.hpp"

using namespace fftg;

namespace {

const DetectorThresholds th;

GrayImage noise(oracle::Gen& gen, int w, int h, double amp, double base = 128.0) {
  GrayImage g(w, h);
  for (double& v : g.data()) v = std::clamp(std::round(base + amp * (gen.unit() - 0.5)), 0.0, 255.0);
  return g;
}

}  // namespace

TEST_CASE("decision rules use strict inequalities") {
  CHECK(color_rule(1.0 + 1e-12, 0.5 + 1e-12, th));
  CHECK_FALSE(color_rule(1.0, 0.6, th));
  CHECK_FALSE(color_rule(1.5, 0.5, th));
  CHECK(blur_rule(300.0, 199.0, th));
  CHECK_FALSE(blur_rule(300.0, 200.0, th));
  CHECK_FALSE(blur_rule(100.0, 300.0, th));
  CHECK(structure_rule(0.9699, th));
  CHECK_FALSE(structure_rule(0.97, th));
  CHECK(texture_rule(0.99, 0.2, th));
  CHECK_FALSE(texture_rule(0.9, 0.2, th));
  CHECK(blend_evidence(15.0, 0.10, 0.5, th) == 0);
  CHECK(blend_evidence(15.01, 0.11, 0.4, th) == 2);
  CHECK(blend_rule(2));
  CHECK_FALSE(blend_rule(1));
}

TEST_CASE("color difference uses Lab channel means and deviations") {
  const RgbImage real = RgbImage::filled(6, 6, 120, 110, 100);
  const RgbImage fake = RgbImage::filled(6, 6, 150, 110, 100);
  const PixelSet all = PixelSet::full(6, 6);
  const TypeEvidence ev = detect_color_difference(real, fake, all, th);
  const auto lr = oracle::cielab(120, 110, 100), lf = oracle::cielab(150, 110, 100);
  const oracle::Real want_m =
      (std::fabs(lr.l - lf.l) * 255.0L / 100.0L + std::fabs(lr.a - lf.a) + std::fabs(lr.b - lf.b)) / 3.0L;
  CHECK(oracle::rel_err(*ev.metric("m"), want_m) < 1e-9);
  CHECK(*ev.metric("s") == 0.0);
  CHECK_FALSE(ev.triggered);  // uniform patches have no spread difference

  oracle::Gen gen(21);
  RgbImage textured(6, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) {
      const auto v = static_cast<std::uint8_t>((x + y) % 2 ? 180 : 60);
      textured.set(x, y, v, v, v);
    }
  const TypeEvidence ev2 = detect_color_difference(textured, fake, all, th);
  CHECK(ev2.triggered);
  CHECK(recompute_trigger(ev2, th));
  CHECK_THROWS_AS(detect_color_difference(real, fake, PixelSet(6, 6), th), Error);
}

TEST_CASE("blur detector compares Laplacian variance") {
  oracle::Gen gen(22);
  const GrayImage sharp = noise(gen, 24, 24, 120.0);
  const GrayImage soft = vision::gaussian_blur(sharp, 2.0, 5);
  const PixelSet all = PixelSet::full(24, 24);
  const TypeEvidence ev = detect_blur(sharp, soft, all, th);
  CHECK(ev.triggered);
  CHECK(*ev.metric("r_var") > *ev.metric("f_var") + 100.0);
  CHECK_FALSE(detect_blur(soft, sharp, all, th).triggered);
  CHECK_FALSE(detect_blur(sharp, sharp, all, th).triggered);
}

TEST_CASE("structure detector triggers below the SSIM limit") {
  oracle::Gen gen(23);
  const GrayImage a = noise(gen, 20, 20, 100.0);
  const PixelSet all = PixelSet::full(20, 20);
  CHECK_FALSE(detect_structure_abnormal(a, a, all, th).triggered);
  const GrayImage b = noise(gen, 20, 20, 100.0);
  const TypeEvidence ev = detect_structure_abnormal(a, b, all, th);
  CHECK(ev.triggered);
  CHECK(*ev.metric("ssim") < 0.5);
}

TEST_CASE("texture detector on canonical patterns") {
  GrayImage checker(10, 10), stripes(10, 10), flat(10, 10, 128.0);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) {
      checker.at(x, y) = (x + y) % 2 ? 255.0 : 0.0;
      stripes.at(x, y) = x % 2 ? 255.0 : 0.0;
    }
  const PixelSet all = PixelSet::full(10, 10);
  const TypeEvidence ev = detect_texture_abnormal(checker, flat, all, th);
  CHECK(*ev.metric("cd_real") == doctest::Approx(65025.0 / 65536.0));
  CHECK(ev.triggered);
  // Stripes reach only half the checkerboard contrast, below the 0.7 gap.
  CHECK_FALSE(detect_texture_abnormal(stripes, flat, all, th).triggered);
}

TEST_CASE("blend boundary: a hard paste collects at least two votes") {
  oracle::Gen gen(24);
  GrayImage img = noise(gen, 48, 48, 8.0, 70.0);
  const PixelSet patch = PixelSet::rect(48, 48, 14, 14, 33, 33);
  for (int y = 14; y <= 33; ++y)
    for (int x = 14; x <= 33; ++x) img.at(x, y) = 200.0 + 8.0 * (gen.unit() - 0.5);
  const TypeEvidence ev = detect_blend_boundary(img, patch, th);
  CAPTURE(*ev.metric("s_g"));
  CAPTURE(*ev.metric("s_e"));
  CAPTURE(*ev.metric("s_f"));
  CHECK(*ev.metric("evidence") >= 2.0);
  CHECK(ev.triggered);
  CHECK(recompute_trigger(ev, th));

  const GrayImage smooth(48, 48, 90.0);
  const TypeEvidence none = detect_blend_boundary(smooth, patch, th);
  CHECK(*ev.metric("s_g") > *none.metric("s_g"));
  CHECK(*none.metric("s_e") == 0.0);
  CHECK(*none.metric("s_f") == 0.0);
  CHECK_FALSE(none.triggered);

  CHECK_THROWS_AS(detect_blend_boundary(img, PixelSet(48, 48), th), Error);
  CHECK_THROWS_AS(detect_blend_boundary(img, PixelSet::full(48, 48), th), Error);
}

TEST_CASE("decide_types runs all five detectors in order and contains failures") {
  oracle::Gen gen(25);
  const RgbImage real = gen.rgb(32, 32);
  RgbImage fake = real;
  for (int y = 8; y < 20; ++y)
    for (int x = 8; x < 20; ++x) fake.set(x, y, 0, 0, 0);
  const PairViews views(real, fake);
  const ForgeryMask mask = generate_mask(real, fake);
  const auto ev = decide_types(views, PixelSet::rect(32, 32, 8, 8, 19, 19), mask, th);
  REQUIRE(ev.size() == 5u);
  for (std::size_t i = 0; i < 5; ++i) CHECK(ev[i].type == kTypeOrder[i]);
  for (const auto& e : ev) {
    CHECK_FALSE(e.note.has_value());
    CHECK(recompute_trigger(e, th) == e.triggered);
  }

  // A region the mask never touches leaves the blend check without a boundary.
  const auto untouched = decide_types(views, PixelSet::rect(32, 32, 24, 24, 30, 30), mask, th);
  CHECK(untouched[4].note.has_value());
  CHECK_FALSE(untouched[4].triggered);
}

TEST_CASE("forgery type names round-trip") {
  for (ForgeryType t : kTypeOrder) CHECK(parse_forgery_type(to_string(t)) == t);
  CHECK_FALSE(parse_forgery_type("Sharpen").has_value());
  DetectorThresholds bad;
  bad.ssim = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
}
