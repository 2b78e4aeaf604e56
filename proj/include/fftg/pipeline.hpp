#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fftg/annotate.hpp"
#include "fftg/blend.hpp"
#include "fftg/config.hpp"
#include "fftg/refine.hpp"
#include "fftg/region.hpp"
#include "json.hpp"

namespace fftg {

inline constexpr const char* kToolVersion = "fftg 1.0.0";

struct PairManifest {
  std::string pair_id;  // "<method>/<id>"
  std::filesystem::path real_path;
  std::filesystem::path fake_path;
  std::filesystem::path landmark_path;
  std::string method;
  int frame_index = 0;  // trailing digits of the id, 0 when there are none
};

struct SkipReport {
  std::string item;
  std::string reason;
};

struct IngestResult {
  std::vector<PairManifest> pairs;
  std::vector<SkipReport> skipped;
};

// root/real/<id>.png, root/fake/<method>/<id>.png, root/landmarks/<id>.json.
// Pairs come out sorted by (method, id). Throws EmptyDataset when no pair is complete.
IngestResult ingest(const std::filesystem::path& root);

int frame_index_of(std::string_view id);

// Closest annotated frame; ties go to the earlier frame.
std::optional<int> nearest_annotated_frame(const std::vector<int>& annotated, int frame);

// Pair-level seed: FNV-1a of the pair id XOR the global seed.
std::uint64_t pair_seed(std::string_view pair_id, std::uint64_t global_seed);

struct BlendRecord {
  RegionName region = RegionName::Face;
  BlendKind kind = BlendKind::Alpha;
  double draw = 0.0;
  std::vector<ForgeryType> implied_types;
  bool converged = true;
  std::string path;  // relative to the output directory; empty when not written
  RawAnnotation raw;  // annotation of the blended image
};

struct PromptTexts {
  std::string guide, task, predefined;
};

struct AnnotationRecord {
  std::string pair_id;
  std::string method;
  int frame_index = 0;
  std::array<double, 4> region_means{};
  double mask_max = 0.0;
  std::string mask_path;
  ForgeryRegionList regions;
  std::vector<std::vector<TypeEvidence>> evidence;  // one list per region
  RawAnnotation raw;
  std::optional<RefinedAnnotation> refined;
  std::optional<PromptTexts> prompt;
  std::optional<BlendRecord> blend;
  std::optional<std::string> blend_error;
  std::optional<std::string> error;
  std::string config_digest;
  std::string tool_version = kToolVersion;
};

nlohmann::json to_json(const AnnotationRecord& rec);
// One line, sorted keys, shortest round-trip numbers.
std::string to_jsonl_line(const AnnotationRecord& rec);

struct PairInput {
  std::string pair_id;
  std::string method;
  int frame_index = 0;
  RgbImage real, fake;
  Landmarks landmarks;
};

struct RunContext {
  std::filesystem::path out_dir;  // empty: no PNG output
  RefineClient* client = nullptr;  // required when refinement is enabled
};

// Mask, regions, detectors, optional blend, raw annotation, optional refinement.
// Stage errors land in the record; nothing escapes except std::bad_alloc.
AnnotationRecord annotate_pair(const PairInput& in, const PipelineConfig& cfg, const RunContext& ctx = {});

AnnotationRecord run_pair(const PairManifest& m, const PipelineConfig& cfg, const RunContext& ctx = {});

struct BatchSummary {
  std::size_t pairs = 0;
  std::size_t errors = 0;
  std::size_t fake = 0;
  std::size_t real = 0;
  std::size_t low_evidence = 0;
  std::size_t remote = 0;
  std::size_t fallbacks = 0;
  std::size_t blends = 0;
  std::array<std::size_t, 4> regions{};  // by RegionName
  std::array<std::size_t, 5> types{};    // triggered statements by ForgeryType

  void add(const AnnotationRecord& rec);
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Writes out_dir/records.jsonl (manifest order) and out_dir/summary.json.
BatchSummary run_batch(const std::vector<PairManifest>& manifests, const PipelineConfig& cfg, int workers,
                       const std::filesystem::path& out_dir);

}  // namespace fftg
