#include "fftg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "fftg/digest.hpp"
#include "json.hpp"

namespace fftg {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::Config, "invalid value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_value(key, v);
}

// Shortest round-trip decimal form.
std::string fmt(double v) { return nlohmann::json(v).dump(); }
std::string fmt(bool v) { return v ? "true" : "false"; }

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

#define FFTG_DOUBLE(name, member)                                                          \
  Field {                                                                                  \
    name, [](PipelineConfig& c, std::string_view v) { c.member = to_double(name, v); },   \
        [](const PipelineConfig& c) { return fmt(c.member); }                              \
  }
#define FFTG_INT(name, member)                                                                            \
  Field {                                                                                                 \
    name, [](PipelineConfig& c, std::string_view v) { c.member = to_int<decltype(c.member)>(name, v); }, \
        [](const PipelineConfig& c) { return std::to_string(c.member); }                                  \
  }
#define FFTG_BOOL(name, member)                                                        \
  Field {                                                                              \
    name, [](PipelineConfig& c, std::string_view v) { c.member = to_bool(name, v); }, \
        [](const PipelineConfig& c) { return fmt(c.member); }                          \
  }
#define FFTG_TEXT(name, member)                                                          \
  Field {                                                                                \
    name, [](PipelineConfig& c, std::string_view v) { c.member = std::string(v); },     \
        [](const PipelineConfig& c) { return c.member; }                                 \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      FFTG_INT("seed", seed),
      FFTG_DOUBLE("region.theta", region_theta),
      FFTG_INT("region.eye_dilation", eye_dilation),
      FFTG_DOUBLE("detectors.color_mean", detectors.color_mean),
      FFTG_DOUBLE("detectors.color_std", detectors.color_std),
      FFTG_DOUBLE("detectors.blur_variance", detectors.blur_variance),
      FFTG_DOUBLE("detectors.ssim", detectors.ssim),
      FFTG_DOUBLE("detectors.texture", detectors.texture),
      FFTG_DOUBLE("detectors.blend_gradient", detectors.blend_gradient),
      FFTG_DOUBLE("detectors.blend_edge", detectors.blend_edge),
      FFTG_DOUBLE("detectors.blend_frequency", detectors.blend_frequency),
      FFTG_INT("detectors.boundary_width", detectors.boundary_width),
      FFTG_DOUBLE("detectors.canny_low", detectors.canny_low),
      FFTG_DOUBLE("detectors.canny_high", detectors.canny_high),
      FFTG_DOUBLE("detectors.canny_sigma", detectors.canny_sigma),
      FFTG_DOUBLE("detectors.dct_low_fraction", detectors.dct_low_fraction),
      FFTG_BOOL("blend.enabled", blend_enabled),
      FFTG_DOUBLE("blend.alpha", blend.alpha),
      FFTG_DOUBLE("blend.alpha_probability", blend.alpha_probability),
      FFTG_DOUBLE("blend.solver_tolerance", blend.solver_tolerance),
      FFTG_INT("blend.max_iterations", blend.max_iterations),
      FFTG_INT("annotate.captions_fake", captions_fake),
      FFTG_INT("annotate.captions_real", captions_real),
      Field{"annotate.subject",
            [](PipelineConfig& c, std::string_view v) {
              if (v == "face") {
                c.subject = Subject::Face;
              } else if (v == "person") {
                c.subject = Subject::Person;
              } else {
                bad_value("annotate.subject", v);
              }
            },
            [](const PipelineConfig& c) { return std::string(to_string(c.subject)); }},
      FFTG_BOOL("refine.enabled", refine_enabled),
      FFTG_TEXT("refine.endpoint", service.endpoint),
      FFTG_TEXT("refine.model", service.model),
      FFTG_DOUBLE("refine.timeout", service.timeout_seconds),
      FFTG_INT("refine.retries", service.retries),
      FFTG_INT("refine.backoff_ms", service.backoff_ms),
      FFTG_INT("refine.max_concurrent", service.max_concurrent),
      Field{"eval.averaging",
            [](PipelineConfig& c, std::string_view v) {
              const auto a = parse_averaging(v);
              if (!a) bad_value("eval.averaging", v);
              c.averaging = *a;
            },
            [](const PipelineConfig& c) { return std::string(to_string(c.averaging)); }},
      FFTG_TEXT("eval.lexicon", lexicon_path),
  };
  return table;
}

#undef FFTG_DOUBLE
#undef FFTG_INT
#undef FFTG_BOOL
#undef FFTG_TEXT

}  // namespace

void PipelineConfig::validate() const {
  if (!(region_theta >= 0.0 && region_theta <= 1.0)) throw Error(ErrorCode::Config, "region.theta must be in [0,1]");
  if (eye_dilation < 0) throw Error(ErrorCode::Config, "region.eye_dilation must be >= 0");
  if (captions_fake < 1 || captions_real < 1) throw Error(ErrorCode::Config, "caption counts must be >= 1");
  try {
    detectors.validate();
    blend.validate();
    service.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.what());
  }
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  for (const Field& f : fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  throw Error(ErrorCode::Config, "unknown config key " + std::string(key));
}

PipelineConfig PipelineConfig::parse(std::string_view text) {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string PipelineConfig::canonical() const {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

std::string PipelineConfig::digest() const { return sha256_hex(canonical()); }

}  // namespace fftg
