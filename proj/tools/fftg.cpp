// Command-line front end for the annotation engine.
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fftg/config.hpp"
#include "fftg/evaluate.hpp"
#include "fftg/pipeline.hpp"
#include "fftg/png_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out;
};

fftg::PipelineConfig load_config(const Common& c) {
  fftg::PipelineConfig cfg = c.config.empty() ? fftg::PipelineConfig{} : fftg::PipelineConfig::load(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.service.with_env_credential();
  cfg.validate();
  return cfg;
}

struct PairArgs {
  std::string real, fake, landmarks, id = "pair";
};

void add_pair_options(CLI::App* sub, PairArgs& a, bool need_landmarks = true) {
  sub->add_option("--real", a.real, "Real image (PNG)")->required()->check(CLI::ExistingFile);
  sub->add_option("--fake", a.fake, "Forged image (PNG)")->required()->check(CLI::ExistingFile);
  auto* lm = sub->add_option("--landmarks", a.landmarks, "68-point landmark JSON")->check(CLI::ExistingFile);
  if (need_landmarks) lm->required();
  sub->add_option("--id", a.id, "Pair id used for seeding");
}

fftg::PairInput load_pair(const PairArgs& a) {
  fftg::PairInput in;
  in.pair_id = a.id;
  in.real = fftg::io::read_png_rgb(a.real);
  in.fake = fftg::io::read_png_rgb(a.fake);
  in.landmarks = fftg::Landmarks::load(a.landmarks);
  return in;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text << '\n';
    return;
  }
  if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
  std::ofstream f(out, std::ios::binary);
  f << text << '\n';
  if (!f) throw fftg::Error(fftg::ErrorCode::Io, "cannot write " + out);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fftg::Error(fftg::ErrorCode::Io, "cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

int cmd_eval(const Common& c, const std::string& records, const std::string& text_field, const std::string& lexicon,
             const std::string& averaging, const std::string& format, const std::string& responses) {
  fftg::PipelineConfig cfg = load_config(c);
  if (!averaging.empty()) cfg.set("eval.averaging", averaging);
  const std::string lex_path = lexicon.empty() ? cfg.lexicon_path : lexicon;
  const auto lex = lex_path.empty() ? fftg::RegionLexicon::defaults() : fftg::RegionLexicon::load(lex_path);

  if (!responses.empty()) {
    std::vector<std::string> texts;
    std::vector<fftg::Label> labels;
    for (const std::string& line : read_lines(responses)) {
      const json j = json::parse(line);
      texts.push_back(j.at("response").get<std::string>());
      const auto l = fftg::parse_label(j.at("label").get<std::string>());
      if (!l) throw fftg::Error(fftg::ErrorCode::InvalidArgument, "label must be real or fake");
      labels.push_back(*l);
    }
    emit(json{{"accuracy", fftg::response_accuracy(texts, labels)}, {"responses", texts.size()}}.dump(2), c.out);
    return 0;
  }

  std::vector<fftg::ScoredRecord> scored;
  for (const std::string& line : read_lines(records)) {
    const json j = json::parse(line);
    if (j.contains("error")) continue;
    fftg::ScoredRecord r;
    for (const auto& reg : j.at("regions")) r.truth.insert(*fftg::parse_region(reg.at("region").get<std::string>()));
    if (text_field == "refined" && j.contains("refined")) {
      for (const auto& cap : j["refined"]["captions"]) r.text += cap.get<std::string>() + "\n";
    } else {
      r.text = j.at("raw").at("full_text").get<std::string>();
    }
    scored.push_back(std::move(r));
  }
  const auto report = fftg::score_annotations(scored, lex, cfg.averaging);
  emit(format == "table" ? fftg::report_table(report) : fftg::report_json(report), c.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face forgery text generator: masks, regions, forgery types, annotations, evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--config", c.config, "Key-value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", c.seed, "Global seed (overrides config)");
  app.add_option("--workers", c.workers, "Worker threads for batch runs")->check(CLI::PositiveNumber);
  app.add_option("--out", c.out, "Output file or directory");

  PairArgs mask_args;
  auto* mask = app.add_subcommand("mask", "Write the forgery mask of a pair as a gray PNG");
  add_pair_options(mask, mask_args, false);

  PairArgs reg_args;
  auto* regions = app.add_subcommand("regions", "Per-region mask means and the thresholded region list");
  add_pair_options(regions, reg_args);

  PairArgs ann_args;
  auto* annotate = app.add_subcommand("annotate", "Full annotation record for one pair (no refinement)");
  add_pair_options(annotate, ann_args);

  PairArgs ref_args;
  auto* refine = app.add_subcommand("refine", "Annotate one pair and refine the text through the remote service");
  add_pair_options(refine, ref_args);

  PairArgs blend_args;
  auto* blend = app.add_subcommand("blend", "Blend the fake into the real over a seeded forgery region");
  add_pair_options(blend, blend_args);

  std::string records, text_field = "raw", lexicon, averaging, format = "json", responses;
  auto* eval = app.add_subcommand("eval", "Score annotation records against their mask-derived regions");
  eval->add_option("--records", records, "records.jsonl")->check(CLI::ExistingFile);
  eval->add_option("--text", text_field, "Which text to score")->check(CLI::IsMember({"raw", "refined"}));
  eval->add_option("--lexicon", lexicon, "Region lexicon JSON")->check(CLI::ExistingFile);
  eval->add_option("--averaging", averaging, "micro or macro")->check(CLI::IsMember({"micro", "macro"}));
  eval->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  eval->add_option("--responses", responses, "JSONL of {response, label}: report response accuracy instead")
      ->check(CLI::ExistingFile);

  std::string data;
  auto* run = app.add_subcommand("run", "Annotate a whole dataset into records.jsonl and summary.json");
  run->add_option("--data", data, "Dataset root with real/, fake/<method>/, landmarks/")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mask) {
      const auto real = fftg::io::read_png_rgb(mask_args.real);
      const auto fake = fftg::io::read_png_rgb(mask_args.fake);
      const auto m = fftg::generate_mask(real, fake);
      const std::string out = c.out.empty() ? "mask.png" : c.out;
      fftg::io::write_png(out, m.to_gray());
      std::printf("mask max %.6f written to %s\n", m.max(), out.c_str());
    } else if (*regions) {
      const auto cfg = load_config(c);
      const auto in = load_pair(reg_args);
      const auto m = fftg::generate_mask(in.real, in.fake);
      const auto parts = fftg::partition_regions(in.landmarks, in.real.width(), in.real.height(), cfg.eye_dilation);
      const auto means = fftg::region_means(m, parts);
      json j;
      for (auto r : fftg::kRegionOrder) j["means"][std::string(fftg::to_string(r))] = means[static_cast<std::size_t>(r)];
      j["regions"] = json::array();
      for (const auto& e : fftg::extract_forgery_regions(m, parts, cfg.region_theta)) {
        j["regions"].push_back({{"region", std::string(fftg::to_string(e.region))}, {"mean", e.mean}});
      }
      emit(j.dump(2), c.out);
    } else if (*annotate || *refine) {
      auto cfg = load_config(c);
      cfg.refine_enabled = static_cast<bool>(*refine);
      const auto rec = fftg::annotate_pair(load_pair(*refine ? ref_args : ann_args), cfg);
      emit(fftg::to_json(rec).dump(2), c.out);
      return rec.error ? 2 : 0;
    } else if (*blend) {
      const auto cfg = load_config(c);
      const auto in = load_pair(blend_args);
      const auto m = fftg::generate_mask(in.real, in.fake);
      const auto parts = fftg::partition_regions(in.landmarks, in.real.width(), in.real.height(), cfg.eye_dilation);
      const auto list = fftg::extract_forgery_regions(m, parts, cfg.region_theta);
      const std::uint64_t seed = fftg::pair_seed(in.pair_id, cfg.seed);
      const auto target = fftg::select_region(list, seed);
      const auto mixed = fftg::make_mixed_forgery(in.real, in.fake, parts[target], cfg.blend, seed);
      const std::string out = c.out.empty() ? "blend.png" : c.out;
      fftg::io::write_png(out, mixed.image);
      std::printf("%s blend of %s (draw %.6f) written to %s\n", std::string(fftg::to_string(mixed.kind)).c_str(),
                  std::string(fftg::to_string(target)).c_str(), mixed.draw, out.c_str());
    } else if (*eval) {
      if (records.empty() && responses.empty()) throw fftg::Error(fftg::ErrorCode::InvalidArgument, "eval needs --records or --responses");
      return cmd_eval(c, records, text_field, lexicon, averaging, format, responses);
    } else if (*run) {
      const auto cfg = load_config(c);
      const auto manifest = fftg::ingest(data);
      for (const auto& s : manifest.skipped) std::fprintf(stderr, "skipped %s: %s\n", s.item.c_str(), s.reason.c_str());
      const fs::path out = c.out.empty() ? fs::path("fftg_out") : fs::path(c.out);
      const auto summary = fftg::run_batch(manifest.pairs, cfg, c.workers, out);
      std::ofstream(out / "summary.txt") << summary.to_text();
      std::fputs(summary.to_text().c_str(), stdout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fftg: %s\n", e.what());
    return 1;
  }
  return 0;
}
