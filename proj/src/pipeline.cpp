#include "fftg/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "fftg/digest.hpp"
#include "fftg/png_io.hpp"

namespace fftg {

namespace fs = std::filesystem;
using nlohmann::json;

int frame_index_of(std::string_view id) {
  std::size_t b = id.size();
  while (b > 0 && id[b - 1] >= '0' && id[b - 1] <= '9') --b;
  int v = 0;
  for (std::size_t i = b; i < id.size() && v < 100000000; ++i) v = 10 * v + (id[i] - '0');
  return v;
}

std::optional<int> nearest_annotated_frame(const std::vector<int>& annotated, int frame) {
  std::optional<int> best;
  for (int f : annotated) {
    if (!best) {
      best = f;
      continue;
    }
    const long long d = std::llabs(static_cast<long long>(f) - frame);
    const long long bd = std::llabs(static_cast<long long>(*best) - frame);
    if (d < bd || (d == bd && f < *best)) best = f;
  }
  return best;
}

std::uint64_t pair_seed(std::string_view pair_id, std::uint64_t global_seed) { return fnv1a64(pair_id) ^ global_seed; }

IngestResult ingest(const fs::path& root) {
  IngestResult out;
  const fs::path real_dir = root / "real", fake_dir = root / "fake", lm_dir = root / "landmarks";
  if (!fs::is_directory(fake_dir)) throw Error(ErrorCode::EmptyDataset, "no fake/ directory under " + root.string());

  std::vector<std::string> methods;
  for (const auto& e : fs::directory_iterator(fake_dir)) {
    if (e.is_directory()) methods.push_back(e.path().filename().string());
  }
  std::sort(methods.begin(), methods.end());
  std::map<std::string, bool> real_used;
  if (fs::is_directory(real_dir)) {
    for (const auto& e : fs::directory_iterator(real_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".png") real_used[e.path().stem().string()] = false;
    }
  }
  for (const std::string& method : methods) {
    std::vector<std::string> ids;
    for (const auto& e : fs::directory_iterator(fake_dir / method)) {
      if (e.is_regular_file() && e.path().extension() == ".png") ids.push_back(e.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    for (const std::string& id : ids) {
      const std::string pid = method + "/" + id;
      PairManifest m{pid,    real_dir / (id + ".png"), fake_dir / method / (id + ".png"), lm_dir / (id + ".json"),
                     method, frame_index_of(id)};
      if (!fs::is_regular_file(m.real_path)) {
        out.skipped.push_back({pid, "missing real image"});
        continue;
      }
      real_used[id] = true;
      if (!fs::is_regular_file(m.landmark_path)) {
        out.skipped.push_back({pid, "missing landmarks"});
        continue;
      }
      out.pairs.push_back(std::move(m));
    }
  }
  for (const auto& [id, used] : real_used) {
    if (!used) out.skipped.push_back({"real/" + id, "no fake counterpart"});
  }
  if (out.pairs.empty()) throw Error(ErrorCode::EmptyDataset, "no complete pairs under " + root.string());
  return out;
}

namespace {

json evidence_json(const TypeEvidence& ev) {
  json metrics = json::object();
  for (const Metric& m : ev.metrics) metrics[m.name] = m.value;
  json j = {{"type", std::string(to_string(ev.type))}, {"triggered", ev.triggered}, {"metrics", metrics}};
  if (ev.note) j["note"] = *ev.note;
  return j;
}

json raw_json(const RawAnnotation& raw) {
  json statements = json::array();
  for (const Statement& s : raw.statements) {
    statements.push_back(
        {{"region", std::string(to_string(s.region))}, {"type", std::string(to_string(s.type))}, {"text", s.text}});
  }
  return {{"label", std::string(to_string(raw.label))},
          {"statements", statements},
          {"full_text", raw.full_text},
          {"low_evidence", raw.low_evidence}};
}

std::string file_stem(std::string_view pair_id) {
  std::string s(pair_id);
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

}  // namespace

json to_json(const AnnotationRecord& rec) {
  json j;
  j["pair_id"] = rec.pair_id;
  j["method"] = rec.method;
  j["frame_index"] = rec.frame_index;
  json means = json::object();
  for (RegionName r : kRegionOrder) means[std::string(to_string(r))] = rec.region_means[static_cast<std::size_t>(r)];
  j["mask"] = {{"region_means", means}, {"max", rec.mask_max}, {"path", rec.mask_path}};
  json regions = json::array();
  for (std::size_t i = 0; i < rec.regions.size(); ++i) {
    json ev = json::array();
    if (i < rec.evidence.size()) {
      for (const TypeEvidence& e : rec.evidence[i]) ev.push_back(evidence_json(e));
    }
    regions.push_back({{"region", std::string(to_string(rec.regions[i].region))},
                       {"mean", rec.regions[i].mean},
                       {"evidence", ev}});
  }
  j["regions"] = regions;
  j["raw"] = raw_json(rec.raw);
  if (rec.refined) {
    j["refined"] = {{"captions", rec.refined->captions},
                    {"source", std::string(to_string(rec.refined->source))},
                    {"model_id", rec.refined->model_id},
                    {"request_digest", rec.refined->request_digest},
                    {"failure", rec.refined->failure},
                    {"attempts", rec.refined->attempts}};
  }
  if (rec.prompt) {
    j["prompt"] = {{"guide", rec.prompt->guide}, {"task", rec.prompt->task}, {"predefined", rec.prompt->predefined}};
  }
  if (rec.blend) {
    json implied = json::array();
    for (ForgeryType t : rec.blend->implied_types) implied.push_back(std::string(to_string(t)));
    j["blend"] = {{"region", std::string(to_string(rec.blend->region))},
                  {"kind", std::string(to_string(rec.blend->kind))},
                  {"draw", rec.blend->draw},
                  {"implied_types", implied},
                  {"converged", rec.blend->converged},
                  {"path", rec.blend->path},
                  {"raw", raw_json(rec.blend->raw)}};
  }
  if (rec.blend_error) j["blend_error"] = *rec.blend_error;
  if (rec.error) j["error"] = *rec.error;
  j["config_digest"] = rec.config_digest;
  j["tool_version"] = rec.tool_version;
  return j;
}

std::string to_jsonl_line(const AnnotationRecord& rec) { return to_json(rec).dump(); }

namespace {

void run_blend(const PairInput& in, const PipelineConfig& cfg, const RunContext& ctx, const RegionMap& parts,
               AnnotationRecord& rec) {
  const std::uint64_t seed = pair_seed(in.pair_id, cfg.seed);
  const RegionName target = select_region(rec.regions, seed);
  const MixedForgery mixed = make_mixed_forgery(in.real, in.fake, parts[target], cfg.blend, seed);
  BlendRecord b;
  b.region = target;
  b.kind = mixed.kind;
  b.draw = mixed.draw;
  b.implied_types = mixed.implied_types;
  b.converged = mixed.converged;

  // The blended image keeps the fake's evidence; implied types are added as
  // triggered evidence on the blended region when no detector already found them.
  auto evidence = rec.evidence;
  for (std::size_t i = 0; i < rec.regions.size(); ++i) {
    if (rec.regions[i].region != target) continue;
    for (ForgeryType t : mixed.implied_types) {
      auto it = std::find_if(evidence[i].begin(), evidence[i].end(), [&](const TypeEvidence& e) { return e.type == t; });
      if (it != evidence[i].end() && it->triggered) continue;
      TypeEvidence implied;
      implied.type = t;
      implied.triggered = true;
      implied.note = "implied by " + std::string(to_string(mixed.kind)) + " blend";
      if (it != evidence[i].end()) {
        *it = std::move(implied);
      } else {
        evidence[i].push_back(std::move(implied));
      }
    }
  }
  b.raw = build_raw_annotation(rec.regions, evidence, Label::Fake, cfg.subject);
  if (!ctx.out_dir.empty()) {
    b.path = "blends/" + file_stem(in.pair_id) + ".png";
    io::write_png(ctx.out_dir / b.path, mixed.image);
  }
  rec.blend = std::move(b);
}

}  // namespace

AnnotationRecord annotate_pair(const PairInput& in, const PipelineConfig& cfg, const RunContext& ctx) {
  AnnotationRecord rec;
  rec.pair_id = in.pair_id;
  rec.method = in.method;
  rec.frame_index = in.frame_index;
  rec.config_digest = cfg.digest();
  try {
    const ForgeryMask mask = generate_mask(in.real, in.fake);
    rec.mask_max = mask.max();
    const RegionMap parts = partition_regions(in.landmarks, in.real.width(), in.real.height(), cfg.eye_dilation);
    rec.region_means = region_means(mask, parts);
    rec.regions = extract_forgery_regions(mask, parts, cfg.region_theta);
    if (!ctx.out_dir.empty()) {
      rec.mask_path = "masks/" + file_stem(in.pair_id) + ".png";
      io::write_png(ctx.out_dir / rec.mask_path, mask.to_gray());
    }

    if (!rec.regions.empty()) {
      const PairViews views(in.real, in.fake);
      for (const RegionEntry& e : rec.regions) rec.evidence.push_back(decide_types(views, parts[e.region], mask, cfg.detectors));
    }
    const Label label = rec.regions.empty() ? Label::Real : Label::Fake;
    rec.raw = build_raw_annotation(rec.regions, rec.evidence, label, cfg.subject);

    if (cfg.blend_enabled && !rec.regions.empty()) {
      try {
        run_blend(in, cfg, ctx, parts, rec);
      } catch (const Error& e) {
        rec.blend_error = e.what();
      }
    }

    if (cfg.refine_enabled) {
      std::vector<TypeEvidence> flat;
      for (const auto& list : rec.evidence) flat.insert(flat.end(), list.begin(), list.end());
      const int k = label == Label::Fake ? cfg.captions_fake : cfg.captions_real;
      const PromptBundle bundle =
          build_prompt_bundle(rec.raw, flat, k, build_visual_prompt(in.real, in.fake), cfg.subject);
      rec.prompt = PromptTexts{bundle.guide, bundle.task, bundle.predefined};
      if (ctx.client) {
        rec.refined = ctx.client->refine(bundle);
      } else {
        rec.refined = refine_annotation(bundle, cfg.service);
      }
    }
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

AnnotationRecord run_pair(const PairManifest& m, const PipelineConfig& cfg, const RunContext& ctx) {
  PairInput in;
  in.pair_id = m.pair_id;
  in.method = m.method;
  in.frame_index = m.frame_index;
  try {
    in.real = io::read_png_rgb(m.real_path);
    in.fake = io::read_png_rgb(m.fake_path);
    in.landmarks = Landmarks::load(m.landmark_path);
  } catch (const std::exception& e) {
    AnnotationRecord rec;
    rec.pair_id = m.pair_id;
    rec.method = m.method;
    rec.frame_index = m.frame_index;
    rec.config_digest = cfg.digest();
    rec.error = e.what();
    return rec;
  }
  return annotate_pair(in, cfg, ctx);
}

void BatchSummary::add(const AnnotationRecord& rec) {
  ++pairs;
  if (rec.error) {
    ++errors;
    return;
  }
  ++(rec.raw.label == Label::Fake ? fake : real);
  if (rec.raw.low_evidence) ++low_evidence;
  for (const RegionEntry& e : rec.regions) ++regions[static_cast<std::size_t>(e.region)];
  for (const Statement& s : rec.raw.statements) ++types[static_cast<std::size_t>(s.type)];
  if (rec.refined) ++(rec.refined->source == CaptionSource::Remote ? remote : fallbacks);
  if (rec.blend) ++blends;
}

json BatchSummary::to_json() const {
  json regs = json::object(), tys = json::object();
  for (RegionName r : kRegionOrder) regs[std::string(to_string(r))] = regions[static_cast<std::size_t>(r)];
  for (ForgeryType t : kTypeOrder) tys[std::string(to_string(t))] = types[static_cast<std::size_t>(t)];
  return {{"pairs", pairs},           {"errors", errors},     {"fake", fake},         {"real", real},
          {"low_evidence", low_evidence}, {"remote", remote}, {"fallbacks", fallbacks}, {"blends", blends},
          {"regions", regs},          {"types", tys}};
}

std::string BatchSummary::to_text() const {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "pairs %zu  errors %zu  fake %zu  real %zu  low_evidence %zu\n", pairs, errors, fake,
                real, low_evidence);
  out += line;
  std::snprintf(line, sizeof line, "refined: remote %zu  fallback %zu  blends %zu\n", remote, fallbacks, blends);
  out += line;
  out += "regions:";
  for (RegionName r : kRegionOrder) {
    out += " " + std::string(to_string(r)) + "=" + std::to_string(regions[static_cast<std::size_t>(r)]);
  }
  out += "\ntypes:";
  for (ForgeryType t : kTypeOrder) {
    out += " " + std::string(to_string(t)) + "=" + std::to_string(types[static_cast<std::size_t>(t)]);
  }
  out += "\n";
  return out;
}

BatchSummary run_batch(const std::vector<PairManifest>& manifests, const PipelineConfig& cfg, int workers,
                       const fs::path& out_dir) {
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  cfg.validate();
  fs::create_directories(out_dir);
  std::ofstream jsonl(out_dir / "records.jsonl", std::ios::binary | std::ios::trunc);
  if (!jsonl) throw Error(ErrorCode::Io, "cannot write " + (out_dir / "records.jsonl").string());

  std::unique_ptr<RefineClient> client;
  if (cfg.refine_enabled) client = std::make_unique<RefineClient>(ServiceConfig(cfg.service).with_env_credential());
  const RunContext ctx{out_dir, client.get()};

  const std::size_t n = manifests.size();
  std::vector<std::optional<AnnotationRecord>> done(n);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        AnnotationRecord rec = run_pair(manifests[i], cfg, ctx);
        std::lock_guard lock(mu);
        done[i] = std::move(rec);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
      ready.notify_all();
    }
  };
  std::vector<std::jthread> pool;
  const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), std::max<std::size_t>(n, 1)));
  for (int t = 0; t < threads; ++t) pool.emplace_back(work);

  BatchSummary summary;
  for (std::size_t i = 0; i < n; ++i) {
    AnnotationRecord rec;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done[i].has_value() || failure; });
      if (!done[i]) break;
      rec = std::move(*done[i]);
      done[i].reset();
    }
    summary.add(rec);
    jsonl << to_jsonl_line(rec) << '\n';
    if (!jsonl) throw Error(ErrorCode::Io, "write failed for records.jsonl");
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  std::ofstream sj(out_dir / "summary.json", std::ios::binary | std::ios::trunc);
  sj << summary.to_json().dump(2) << '\n';
  if (!sj) throw Error(ErrorCode::Io, "cannot write summary.json");
  return summary;
}

}  // namespace fftg
