// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fftg/blend.hpp"
#include "fftg/detectors.hpp"
#include "fftg/evaluate.hpp"
#include "fftg/pipeline.hpp"
#include "fftg/refine.hpp"
#include "fftg/region.hpp"
#include "fftg/synthetic.hpp"
#include "fftg/vision.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "stub_server.hpp"

using namespace fftg;
namespace fs = std::filesystem;
using oracle::Real;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 8) problems.push_back(what);
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Plain relative error; an exact zero must be matched to 1e-12 absolute.
Real rel(Real got, Real want) {
  if (want == 0) return std::fabs(got) < 1e-12L ? 0 : 1;
  return std::fabs(got - want) / std::fabs(want);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- 1

Outcome kernel_oracles() {
  Outcome o;
  const auto t0 = Clock::now();
  oracle::Gen gen(1001);
  constexpr int kInstances = 150;
  Real worst[5] = {0, 0, 0, 0, 0};  // ssim, glcm, laplacian, sobel, dct
  for (int i = 0; i < kInstances; ++i) {
    const GrayImage a = gen.gray(16, 16);
    GrayImage b = gen.gray(16, 16);
    if (i % 2) {
      b = a;
      for (double& v : b.data()) v = std::clamp(v + 40.0 * (gen.unit() - 0.5), 0.0, 255.0);
    }
    PixelSet region = gen.region(16, 16);
    region.set(7, 7);
    region.set(8, 7);
    worst[0] = std::max(worst[0], rel(vision::ssim(a, b, region), oracle::ssim(a, b, region)));
    worst[1] = std::max(worst[1], rel(vision::glcm_contrast(a, region), oracle::glcm_contrast(a, region)));
    worst[2] = std::max(worst[2], rel(vision::laplacian_variance(a, region), oracle::laplacian_variance(a, region)));
    const GrayImage mag = vision::sobel_magnitude(a);
    const auto want = oracle::sobel_magnitude(a);
    for (std::size_t k = 0; k < want.size(); ++k) worst[3] = std::max(worst[3], rel(mag.data()[k], want[k]));
    worst[4] = std::max(worst[4], rel(vision::dct_band_ratio(a, region, 0.25), oracle::dct_band_ratio(a, region, 0.25L)));
  }
  const double elapsed = seconds_since(t0);
  const char* names[5] = {"ssim", "glcm", "laplacian", "sobel", "dct"};
  for (int k = 0; k < 5; ++k) {
    const Real tol = k == 0 ? 1e-9L : 1e-6L;
    o.require(worst[k] < tol, std::string(names[k]) + " max rel err " + fmt("%.3g", static_cast<double>(worst[k])));
  }
  o.require(elapsed < 30.0, "runtime " + fmt("%.2f", elapsed) + " s");
  o.detail = std::to_string(kInstances) + " instances, max rel err ssim " + fmt("%.2g", static_cast<double>(worst[0])) +
             " glcm " + fmt("%.2g", static_cast<double>(worst[1])) + " lap " + fmt("%.2g", static_cast<double>(worst[2])) +
             " sobel " + fmt("%.2g", static_cast<double>(worst[3])) + " dct " + fmt("%.2g", static_cast<double>(worst[4])) +
             ", " + fmt("%.2f", elapsed) + " s";
  return o;
}

// ---------------------------------------------------------------- 2

struct Tally {
  int cases = 0, agree = 0, positives = 0;
};

void record(Outcome& o, Tally& t, const char* what, bool got, bool want) {
  ++t.cases;
  if (want) ++t.positives;
  if (got == want) {
    ++t.agree;
  } else {
    o.require(false, std::string(what) + " case " + std::to_string(t.cases) + ": detector " + (got ? "true" : "false"));
  }
}

// Scaled CIELAB plane value as the detectors see it.
Real lab_channel(const RgbImage& img, int x, int y, int c) {
  const auto* p = img.pixel(x, y);
  const oracle::LabL lab = oracle::cielab(p[0], p[1], p[2]);
  const Real v = c == 0 ? lab.l * 255.0L / 100.0L : (c == 1 ? lab.a + 128.0L : lab.b + 128.0L);
  return std::clamp<Real>(v, 0, 255);
}

bool color_expected(const RgbImage& real, const RgbImage& fake, const PixelSet& region, const DetectorThresholds& th) {
  Real msum = 0, ssum = 0;
  for (int c = 0; c < 3; ++c) {
    Real stats[2][2];
    const RgbImage* imgs[2] = {&real, &fake};
    for (int k = 0; k < 2; ++k) {
      Real sum = 0, sq = 0;
      long long n = 0;
      for (int y = 0; y < real.height(); ++y)
        for (int x = 0; x < real.width(); ++x)
          if (region.test(x, y)) {
            sum += lab_channel(*imgs[k], x, y, c);
            ++n;
          }
      const Real mean = sum / n;
      for (int y = 0; y < real.height(); ++y)
        for (int x = 0; x < real.width(); ++x)
          if (region.test(x, y)) sq += (lab_channel(*imgs[k], x, y, c) - mean) * (lab_channel(*imgs[k], x, y, c) - mean);
      stats[k][0] = mean;
      stats[k][1] = std::sqrt(sq / n);
    }
    msum += std::fabs(stats[0][0] - stats[1][0]);
    ssum += std::fabs(stats[0][1] - stats[1][1]);
  }
  return msum / 3 > th.color_mean && ssum / 3 > th.color_std;
}

std::vector<Real> sobel_plane(const GrayImage& img) { return oracle::sobel_magnitude(img); }

Outcome decision_tables() {
  Outcome o;
  const DetectorThresholds th;
  std::map<std::string, Tally> tallies;

  // Rule level: each threshold probed just below, at, and just above.
  {
    Tally& t = tallies["rules"];
    auto around = [](double v) { return std::vector<double>{std::nextafter(v, -1e300), v, std::nextafter(v, 1e300)}; };
    for (double m : around(th.color_mean))
      for (double s : around(th.color_std)) record(o, t, "color rule", color_rule(m, s, th), m > 1.0 && s > 0.5);
    for (double base : {0.0, 50.0, 1000.0})
      for (double d : around(th.blur_variance)) {
        record(o, t, "blur rule", blur_rule(base + d, base, th), (base + d) - base > 100.0);
        record(o, t, "blur rule reversed", blur_rule(base, base + d, th), false);
      }
    for (double s : around(th.ssim)) record(o, t, "structure rule", structure_rule(s, th), s < 0.97);
    for (double d : around(th.texture)) {
      record(o, t, "texture rule", texture_rule(d, 0.0, th), d > 0.7);
      record(o, t, "texture rule reversed", texture_rule(0.0, d, th), false);
    }
    for (double g : around(th.blend_gradient))
      for (double e : around(th.blend_edge))
        for (double f : around(th.blend_frequency)) {
          const int votes = (g > 15.0) + (e > 0.10) + (f > 0.5);
          record(o, t, "blend rule", blend_rule(blend_evidence(g, e, f, th)), votes >= 2);
        }
  }

  oracle::Gen gen(2002);
  // Color: textured patch against shifted, contrast-scaled copies.
  {
    Tally& t = tallies["color"];
    for (int base = 0; base < 4; ++base) {
      RgbImage real(20, 20);
      const int r0 = 60 + 40 * base, g0 = 90 + 20 * base, b0 = 120 - 15 * base;
      for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
          real.set(x, y, static_cast<std::uint8_t>(r0 + gen.below(30)), static_cast<std::uint8_t>(g0 + gen.below(30)),
                   static_cast<std::uint8_t>(b0 + gen.below(30)));
      const PixelSet region = base % 2 ? PixelSet::rect(20, 20, 3, 3, 16, 16) : PixelSet::full(20, 20);
      for (int shift : {0, 1, 2, 3, 5})
        for (double contrast : {1.0, 0.97, 0.93, 0.85, 0.7}) {
          RgbImage fake(20, 20);
          for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 20; ++x) {
              const auto* p = real.pixel(x, y);
              std::uint8_t q[3];
              const int centre[3] = {r0 + 15, g0 + 15, b0 + 15};
              for (int c = 0; c < 3; ++c) {
                const double v = centre[c] + contrast * (p[c] - centre[c]) + (c == 0 ? shift : -shift);
                q[c] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
              }
              fake.set(x, y, q[0], q[1], q[2]);
            }
          record(o, t, "color", detect_color_difference(real, fake, region, th).triggered,
                 color_expected(real, fake, region, th));
        }
    }
  }
  // Blur: mixtures of a noise patch and its smoothed version.
  {
    Tally& t = tallies["blur"];
    for (double amp : {20.0, 60.0, 140.0}) {
      GrayImage real(24, 24);
      for (double& v : real.data()) v = std::round(128.0 + amp * (gen.unit() - 0.5));
      const GrayImage soft = vision::gaussian_blur(real, 1.5, 5);
      const PixelSet region = gen.region(24, 24) | PixelSet::rect(24, 24, 6, 6, 17, 17);
      for (int step = 0; step <= 20; ++step) {
        const double w = step / 20.0;
        GrayImage fake(24, 24);
        for (std::size_t i = 0; i < fake.data().size(); ++i) fake.data()[i] = (1 - w) * real.data()[i] + w * soft.data()[i];
        const Real rv = oracle::laplacian_variance(real, region), fv = oracle::laplacian_variance(fake, region);
        record(o, t, "blur", detect_blur(real, fake, region, th).triggered, rv > fv && rv - fv > 100.0L);
        record(o, t, "blur swapped", detect_blur(fake, real, region, th).triggered, fv > rv && fv - rv > 100.0L);
      }
    }
  }
  // Structure: growing perturbations of one patch.
  {
    Tally& t = tallies["structure"];
    for (int rep = 0; rep < 3; ++rep) {
      const GrayImage a = gen.gray(20, 20);
      const PixelSet region = rep == 2 ? PixelSet::rect(20, 20, 2, 2, 7, 8) : PixelSet::rect(20, 20, 1, 2, 18, 17);
      std::vector<double> noise(a.data().size());
      for (double& n : noise) n = gen.unit() - 0.5;
      for (int step = 0; step <= 30; ++step) {
        GrayImage b = a;
        for (std::size_t i = 0; i < b.data().size(); ++i) b.data()[i] = a.data()[i] + 5.0 * step * noise[i];
        record(o, t, "structure", detect_structure_abnormal(a, b, region, th).triggered,
               oracle::ssim(a, b, region) < 0.97L);
      }
    }
  }
  // Texture: checkerboards of varying amplitude against weaker ones.
  {
    Tally& t = tallies["texture"];
    auto checker = [](int amp) {
      GrayImage g(16, 16);
      for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) g.at(x, y) = (x + y) % 2 ? 128.0 + amp / 2 : 128.0 - (amp - amp / 2);
      return g;
    };
    for (int fake_amp : {0, 40, 90})
      for (int amp = 180; amp <= 255; amp += 3) {
        const GrayImage real = checker(std::min(amp, 255)), fake = checker(fake_amp);
        for (const PixelSet& region : {PixelSet::full(16, 16), PixelSet::rect(16, 16, 2, 3, 12, 13)}) {
          const Real cr = oracle::glcm_contrast(real, region), cf = oracle::glcm_contrast(fake, region);
          record(o, t, "texture", detect_texture_abnormal(real, fake, region, th).triggered, cr > cf && cr - cf > 0.7L);
        }
      }
  }
  // Blend boundary: pasted patches of varying contrast over noisy backgrounds.
  // Gradient and frequency votes come from oracles; the edge vote uses the
  // library's Canny density, which has no closed form.
  {
    Tally& t = tallies["blend"];
    const PixelSet patch = PixelSet::rect(40, 40, 12, 12, 27, 27);
    const PixelSet inner = patch - oracle::erode_l1(patch, th.boundary_width);
    const PixelSet outer = oracle::dilate_l1(patch, th.boundary_width) - patch;
    const PixelSet band = inner | outer;
    for (double noise : {0.0, 6.0, 30.0})
      for (int d = 0; d <= 80; d += 4) {
        GrayImage img(40, 40);
        for (int y = 0; y < 40; ++y)
          for (int x = 0; x < 40; ++x)
            img.at(x, y) = std::round(90.0 + noise * (gen.unit() - 0.5) + (patch.test(x, y) ? d : 0));
        const auto grad = sobel_plane(img);
        const Real s_g = std::fabs(oracle::masked_mean(grad, 40, inner) - oracle::masked_mean(grad, 40, outer));
        const Real s_f = oracle::dct_band_ratio(img, band, th.dct_low_fraction);
        const TypeEvidence ev = detect_blend_boundary(img, patch, th);
        const double s_e = *ev.metric("s_e");
        const int votes = (s_g > th.blend_gradient) + (s_e > th.blend_edge) + (s_f > th.blend_frequency);
        record(o, t, "blend", ev.triggered, votes >= 2);
      }
  }

  int cases = 0, agree = 0;
  o.detail.clear();
  for (const auto& [name, t] : tallies) {
    cases += t.cases;
    agree += t.agree;
    o.detail += name + " " + std::to_string(t.agree) + "/" + std::to_string(t.cases) + " (" +
                std::to_string(t.positives) + " true), ";
    o.require(t.positives > 0 && t.positives < t.cases, name + " grid does not straddle its threshold");
  }
  o.detail += "agreement " + std::to_string(agree) + "/" + std::to_string(cases);
  return o;
}

// ---------------------------------------------------------------- 3

Outcome mask_properties() {
  Outcome o;
  oracle::Gen gen(3003);
  int identical = 0;
  for (int i = 0; i < 50; ++i) {
    const int w = 48 + gen.below(40), h = 48 + gen.below(40);
    const RgbImage img = gen.rgb(w, h);
    const ForgeryMask m = generate_mask(img, img);
    const bool zero = std::all_of(m.values().begin(), m.values().end(), [](double v) { return v == 0.0; });
    const RegionMap map = partition_regions(synthetic::template_landmarks(w, h, i), w, h);
    o.require(zero && extract_forgery_regions(m, map, 0.0).empty(), "identical pair " + std::to_string(i));
    identical += zero;
  }
  // Whole-pipeline view of identical pairs.
  for (int i = 0; i < 10; ++i) {
    const synthetic::Pair p = synthetic::make_pair(500 + i, 64, 64, 0);
    PairInput in{"same/" + std::to_string(i), "same", 0, p.real, p.fake, p.landmarks};
    const AnnotationRecord rec = annotate_pair(in, PipelineConfig{});
    o.require(!rec.error && rec.regions.empty() && rec.mask_max == 0.0, "pipeline identical pair " + std::to_string(i));
  }

  const std::vector<double> thetas = {0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
  int monotone = 0, recounts = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 40 + gen.below(30), h = 40 + gen.below(30);
    std::vector<double> vals(static_cast<std::size_t>(w) * h);
    const double scale = gen.unit();
    for (double& v : vals) v = scale * gen.unit();
    const ForgeryMask mask(w, h, vals);
    const RegionMap map = partition_regions(synthetic::template_landmarks(w, h, 10000 + i), w, h);
    bool ok = true;
    std::vector<std::set<RegionName>> sets;
    for (double t : thetas) {
      std::set<RegionName> s;
      for (const RegionEntry& e : extract_forgery_regions(mask, map, t)) s.insert(e.region);
      sets.push_back(s);
    }
    for (std::size_t k = 1; k < sets.size(); ++k)
      ok = ok && std::includes(sets[k - 1].begin(), sets[k - 1].end(), sets[k].begin(), sets[k].end());
    // A random theta between two grid points must also sit between their lists.
    const double mid = gen.unit();
    std::set<RegionName> sm;
    for (const RegionEntry& e : extract_forgery_regions(mask, map, mid)) sm.insert(e.region);
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      if (thetas[k] <= mid) ok = ok && std::includes(sets[k].begin(), sets[k].end(), sm.begin(), sm.end());
      if (thetas[k] >= mid) ok = ok && std::includes(sm.begin(), sm.end(), sets[k].begin(), sets[k].end());
    }
    monotone += ok;
    o.require(ok, "theta monotonicity on mask " + std::to_string(i));

    const auto means = region_means(mask, map);
    bool exact = true;
    for (RegionName r : kRegionOrder) {
      double sum = 0.0;
      std::size_t n = 0;
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          if (map[r].test(x, y)) {
            sum += vals[static_cast<std::size_t>(y) * w + x];
            ++n;
          }
      exact = exact && means[static_cast<std::size_t>(r)] == sum / static_cast<double>(n);
      // Entries carry the same means, and the strict threshold is honoured.
      for (const RegionEntry& e : extract_forgery_regions(mask, map, 0.05))
        if (e.region == r) exact = exact && e.mean == means[static_cast<std::size_t>(r)] && e.mean > 0.05;
    }
    recounts += exact;
    o.require(exact, "region mean recount on mask " + std::to_string(i));
  }
  o.detail = "identical pairs zero " + std::to_string(identical) + "/50, theta-monotone " + std::to_string(monotone) +
             "/1000, exact recounts " + std::to_string(recounts) + "/1000";
  return o;
}

// ---------------------------------------------------------------- 4

bool outside_equal(const RgbImage& out, const RgbImage& real, const PixelSet& region) {
  for (int y = 0; y < real.height(); ++y)
    for (int x = 0; x < real.width(); ++x)
      if (!region.test(x, y))
        for (int c = 0; c < 3; ++c)
          if (out.pixel(x, y)[c] != real.pixel(x, y)[c]) return false;
  return true;
}

PixelSet interior_blob(oracle::Gen& gen, int w, int h) {
  for (;;) {
    PixelSet s(w, h);
    const double cx = w / 2.0 + (gen.unit() - 0.5) * 6, cy = h / 2.0 + (gen.unit() - 0.5) * 6;
    const double rx = 3 + gen.unit() * (w / 2.0 - 5), ry = 3 + gen.unit() * (h / 2.0 - 5);
    for (int y = 1; y < h - 1; ++y)
      for (int x = 1; x < w - 1; ++x) {
        const double dx = (x - cx) / rx, dy = (y - cy) / ry;
        if (dx * dx + dy * dy <= 1.0) s.set(x, y);
      }
    if (!vision::erode(s, 1).none()) return s;
  }
}

Outcome blending() {
  Outcome o;
  oracle::Gen gen(4004);
  long long alpha_px = 0;
  for (int i = 0; i < 100; ++i) {
    const RgbImage real = gen.rgb(24, 24), fake = gen.rgb(24, 24);
    const PixelSet region = gen.region(24, 24);
    const double alpha = i == 0 ? 0.9 : gen.unit();
    const RgbImage out = alpha_blend(real, fake, region, alpha);
    bool exact = outside_equal(out, real, region);
    for (int y = 0; y < 24; ++y)
      for (int x = 0; x < 24; ++x)
        if (region.test(x, y))
          for (int c = 0; c < 3; ++c) {
            const double v = alpha * fake.pixel(x, y)[c] + (1.0 - alpha) * real.pixel(x, y)[c];
            exact = exact && out.pixel(x, y)[c] == static_cast<int>(std::round(v));
            ++alpha_px;
          }
    o.require(exact, "alpha blend instance " + std::to_string(i));
  }

  BlendConfig cfg;
  Real worst = 0;
  int poisson_ok = 0;
  for (int i = 0; i < 20; ++i) {
    const int w = 20 + gen.below(12), h = 20 + gen.below(12);
    const RgbImage real = gen.rgb(w, h), fake = gen.rgb(w, h);
    const PixelSet region = interior_blob(gen, w, h);
    const PoissonSolution sol = poisson_blend(real, fake, region, cfg);
    bool ok = sol.converged && outside_equal(sol.image, real, region);
    for (int c = 0; c < 3; ++c) {
      const auto& u = sol.channels[c];
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
          if (!region.test(x, y)) continue;
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          auto f = [&](int xx, int yy) { return static_cast<Real>(fake.pixel(xx, yy)[c]); };
          const Real lap_u = 4.0L * u[p] - u[p - 1] - u[p + 1] - u[p - w] - u[p + w];
          const Real lap_f = 4.0L * f(x, y) - f(x - 1, y) - f(x + 1, y) - f(x, y - 1) - f(x, y + 1);
          worst = std::max(worst, std::fabs(lap_u - lap_f));
        }
    }
    poisson_ok += ok;
    o.require(ok, "poisson instance " + std::to_string(i) + " not converged or touched outside");
  }
  o.require(worst < 10.0L * cfg.solver_tolerance, "poisson residual " + fmt("%.3g", static_cast<double>(worst)));

  int constant_ok = 0;
  for (int i = 0; i < 10; ++i) {
    const int w = 9 + gen.below(20), h = 9 + gen.below(20);
    const auto rv = static_cast<std::uint8_t>(gen.below(256)), fv = static_cast<std::uint8_t>(gen.below(256));
    const RgbImage real = RgbImage::filled(w, h, rv, static_cast<std::uint8_t>(255 - rv), 7);
    const RgbImage fake = RgbImage::filled(w, h, fv, 3, static_cast<std::uint8_t>(255 - fv));
    const PixelSet region = interior_blob(gen, w, h);
    const PoissonSolution sol = poisson_blend(real, fake, region, cfg);
    bool ok = sol.image == real;
    for (int c = 0; c < 3; ++c)
      for (std::size_t k = 0; k < sol.channels[c].size(); ++k) ok = ok && sol.channels[c][k] == real.data()[3 * k + c];
    constant_ok += ok;
    o.require(ok, "constant fill instance " + std::to_string(i));
  }
  o.detail = "alpha exact on " + std::to_string(alpha_px) + " channel samples, poisson " + std::to_string(poisson_ok) +
             "/20 max residual " + fmt("%.2g", static_cast<double>(worst)) + " (bound " +
             fmt("%.0e", 10 * cfg.solver_tolerance) + "), constant fill exact " + std::to_string(constant_ok) + "/10";
  return o;
}

// ---------------------------------------------------------------- 5

Outcome self_consistency() {
  Outcome o;
  const PipelineConfig cfg;
  const RegionLexicon lex = RegionLexicon::defaults();
  std::vector<ScoredRecord> scored;
  std::vector<AnnotationRecord> recs;
  for (int i = 0; i < 200; ++i) {
    const synthetic::Pair p = synthetic::make_pair(70000 + i, 128, 128, -1);
    PairInput in{"synthetic/s" + std::to_string(i), "synthetic", i, p.real, p.fake, p.landmarks};
    AnnotationRecord rec = annotate_pair(in, cfg);
    o.require(!rec.error, "pair " + std::to_string(i) + " error: " + rec.error.value_or(""));
    std::set<RegionName> truth;
    for (const RegionEntry& e : rec.regions) truth.insert(e.region);
    scored.push_back({rec.raw.full_text, truth});
    recs.push_back(std::move(rec));
  }
  const EvalReport report = score_annotations(scored, lex);
  int misses = 0, explained = 0, low = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    low += recs[i].raw.low_evidence;
    for (std::size_t k = 0; k < recs[i].regions.size(); ++k) {
      if (report.records[i].mentioned.count(recs[i].regions[k].region)) continue;
      ++misses;
      const bool none = std::none_of(recs[i].evidence[k].begin(), recs[i].evidence[k].end(),
                                     [](const TypeEvidence& e) { return e.triggered; });
      explained += none;
      o.require(none, "record " + std::to_string(i) + " misses a region with triggered evidence");
    }
  }
  o.require(report.aggregate.precision == 1.0, "precision " + fmt("%.6f", report.aggregate.precision));
  o.require(report.aggregate.recall >= 0.95, "recall " + fmt("%.6f", report.aggregate.recall));
  o.detail = "200 pairs, TP " + std::to_string(report.totals.tp) + " FP " + std::to_string(report.totals.fp) + " FN " +
             std::to_string(report.totals.fn) + ", precision " + fmt("%.4f", report.aggregate.precision) + " recall " +
             fmt("%.4f", report.aggregate.recall) + ", misses " + std::to_string(misses) + " (without triggered types " +
             std::to_string(explained) + "), low-evidence records " + std::to_string(low);
  return o;
}

// ---------------------------------------------------------------- 6

Outcome refine_robustness() {
  Outcome o;
  auto caps = [](bool fake, const std::string& phrase) {
    return nlohmann::json{{"is_fake", fake}, {"captions", {phrase + ", the mouth lacks natural texture.", phrase + " with odd lips.", phrase + "."}}}.dump();
  };
  const std::string good = caps(true, "This is a fake face");
  struct Case {
    std::string name;
    stub::Reply reply;
    CaptionSource expected;
  };
  const std::vector<Case> cases = {
      {"valid", {200, stub::envelope(good)}, CaptionSource::Remote},
      {"fence-wrapped", {200, stub::envelope("Here you go:\n```json\n" + good + "\n```")}, CaptionSource::Remote},
      {"phrase-missing", {200, stub::envelope(caps(true, "A forged portrait"))}, CaptionSource::FallbackRaw},
      {"label-flipped", {200, stub::envelope(caps(false, "This is a fake face"))}, CaptionSource::FallbackRaw},
      {"timeout", {200, stub::envelope(good), 1500}, CaptionSource::FallbackRaw},
  };
  RawAnnotation raw;
  raw.label = Label::Fake;
  raw.full_text = "This is a fake face, the mouth lacks natural texture.";
  TypeEvidence ev;
  ev.type = ForgeryType::TextureAbnormal;
  ev.triggered = true;
  const std::vector<TypeEvidence> evs = {ev};
  oracle::Gen gen(6006);
  const PromptBundle bundle = build_prompt_bundle(raw, evs, 3, build_visual_prompt(gen.rgb(16, 16), gen.rgb(16, 16)));

  int matched = 0;
  std::string detail;
  for (const Case& c : cases) {
    stub::Server server([&](int, const std::string&) { return c.reply; });
    ServiceConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.timeout_seconds = 0.3;
    cfg.retries = 1;
    cfg.backoff_ms = 1;
    bool threw = false;
    RefinedAnnotation r;
    try {
      r = refine_annotation(bundle, cfg);
    } catch (...) {
      threw = true;
    }
    bool ok = !threw && r.source == c.expected;
    if (ok && c.expected == CaptionSource::Remote) {
      ok = r.captions.size() == 3u &&
           std::all_of(r.captions.begin(), r.captions.end(),
                       [](const std::string& s) { return s.find("This is a fake face") != std::string::npos; });
    }
    if (ok && c.expected == CaptionSource::FallbackRaw) ok = r.captions == std::vector<std::string>{raw.full_text};
    matched += ok;
    o.require(ok, c.name + " gave " + std::string(to_string(r.source)) + (threw ? " (threw)" : ""));
    detail += c.name + "->" + std::string(to_string(r.source)) + " ";
  }
  o.detail = std::to_string(matched) + "/5 as specified: " + detail;
  o.detail.pop_back();
  return o;
}

// ---------------------------------------------------------------- 7

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    out[fs::relative(e.path(), root).generic_string()] = s.str();
  }
  return out;
}

Outcome determinism() {
  Outcome o;
  const fs::path data = fs::path(FFTG_FIXTURE_DIR) / "synthetic20";
  const fs::path base = fs::temp_directory_path() / "fftg_acceptance_det";
  fs::remove_all(base);
  PipelineConfig cfg;
  cfg.seed = 2024;
  cfg.blend_enabled = true;
  const auto t0 = Clock::now();
  const IngestResult ing = ingest(data);
  const BatchSummary a = run_batch(ing.pairs, cfg, 1, base / "w1_a");
  run_batch(ing.pairs, cfg, 1, base / "w1_b");
  run_batch(ing.pairs, cfg, 8, base / "w8");
  const double elapsed = seconds_since(t0);
  const auto ta = tree_bytes(base / "w1_a"), tb = tree_bytes(base / "w1_b"), t8 = tree_bytes(base / "w8");
  o.require(ing.pairs.size() == 20u, "fixture has " + std::to_string(ing.pairs.size()) + " pairs");
  o.require(ta == tb, "repeat run differs");
  o.require(ta == t8, "workers 1 vs 8 differ");
  o.require(a.errors == 0, std::to_string(a.errors) + " record errors");
  o.require(elapsed < 60.0, "runtime " + fmt("%.2f", elapsed) + " s");
  std::size_t bytes = 0;
  for (const auto& [k, v] : ta) bytes += v.size();
  o.detail = std::to_string(ing.pairs.size()) + " pairs, " + std::to_string(ta.size()) + " output files (" +
             std::to_string(bytes) + " bytes) identical across 2 runs and workers 1/8, 3 runs in " + fmt("%.2f", elapsed) +
             " s";
  fs::remove_all(base);
  return o;
}

// ---------------------------------------------------------------- 8

Outcome evaluator_arithmetic() {
  Outcome o;
  const RegionLexicon lex = RegionLexicon::defaults();
  const EvalReport half = score_annotations({{"the mouth and the nose show artifacts", {RegionName::Mouth}}}, lex);
  o.require(half.aggregate.precision == 0.5, "P = " + fmt("%.17g", half.aggregate.precision));
  o.require(half.aggregate.recall == 1.0, "R = " + fmt("%.17g", half.aggregate.recall));
  o.require(half.aggregate.f1 == 2.0 / 3.0, "F1 = " + fmt("%.17g", half.aggregate.f1));

  const EvalReport perfect =
      score_annotations({{"the eyes look odd", {RegionName::Eyes}}, {"lips and chin", {RegionName::Mouth, RegionName::Face}}}, lex);
  o.require(perfect.aggregate.precision == 1.0 && perfect.aggregate.recall == 1.0 && perfect.aggregate.f1 == 1.0,
            "exact mentions do not give 1/1/1");

  const EvalReport silent = score_annotations({{"nothing notable", {RegionName::Nose}}}, lex);
  o.require(silent.aggregate.precision == 0.0 && silent.aggregate.recall == 0.0 && silent.aggregate.f1 == 0.0,
            "no mentions with nonempty truth");
  const EvalReport empty_truth = score_annotations({{"This is a real face.", {}}}, lex);
  o.require(empty_truth.aggregate.precision == 0.0 && empty_truth.aggregate.recall == 0.0 &&
                empty_truth.aggregate.f1 == 0.0,
            "all-zero confusion");
  const Prf fp_only = prf_from_counts(0, 3, 0);
  o.require(fp_only.precision == 0.0 && fp_only.recall == 0.0 && fp_only.f1 == 0.0, "false positives only");
  const Prf fn_only = prf_from_counts(0, 0, 2);
  o.require(fn_only.precision == 0.0 && fn_only.recall == 0.0 && fn_only.f1 == 0.0, "false negatives only");
  o.detail = "P " + fmt("%.4f", half.aggregate.precision) + " R " + fmt("%.4f", half.aggregate.recall) + " F1 " +
             fmt("%.6f", half.aggregate.f1) + "; zero-denominator cases give 0";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "kernel oracles", kernel_oracles},
      {2, "detector decision tables", decision_tables},
      {3, "mask and region properties", mask_properties},
      {4, "blending", blending},
      {5, "self-consistency on 200 synthetic pairs", self_consistency},
      {6, "refinement robustness", refine_robustness},
      {7, "determinism on the 20-pair fixture", determinism},
      {8, "evaluator arithmetic", evaluator_arithmetic},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.problems.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d %s: %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str());
    for (const std::string& p : out.problems) std::printf("       - %s\n", p.c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
