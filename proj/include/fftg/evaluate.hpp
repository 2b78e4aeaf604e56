#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fftg/annotate.hpp"
#include "fftg/region.hpp"

namespace fftg {

// Region -> single-word, lowercase match terms. Term sets are pairwise disjoint.
struct RegionLexicon {
  std::map<RegionName, std::set<std::string>> terms;

  static RegionLexicon defaults();
  // JSON object mapping region name to a list of terms.
  static RegionLexicon parse(std::string_view json_text);
  static RegionLexicon load(const std::filesystem::path& path);

  void validate() const;
};

// Lowercased alphabetic tokens, with the mandatory "this is a real/fake
// face|person" phrase removed so the label sentence never counts as a region mention.
std::vector<std::string> content_tokens(std::string_view text);

std::set<RegionName> extract_region_mentions(std::string_view text, const RegionLexicon& lexicon);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero denominators give 0.
Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn);

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0;
};

struct ScoredRecord {
  std::string text;
  std::set<RegionName> truth;
};

struct RecordScore {
  std::set<RegionName> mentioned;
  Confusion counts;
  Prf prf;
};

enum class Averaging { Micro, Macro };
std::string_view to_string(Averaging a);
std::optional<Averaging> parse_averaging(std::string_view s);

struct EvalReport {
  Averaging averaging = Averaging::Micro;
  Prf aggregate;
  Confusion totals;
  std::array<Confusion, 4> per_region{};  // indexed by RegionName
  std::vector<RecordScore> records;
};

EvalReport score_annotations(const std::vector<ScoredRecord>& records, const RegionLexicon& lexicon,
                             Averaging averaging = Averaging::Micro);

std::string report_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

// The first whole-word occurrence of "real" or "fake" decides; neither decides nothing.
std::optional<Label> decisive_label(std::string_view response);

double response_accuracy(const std::vector<std::string>& responses, const std::vector<Label>& labels);

}  // namespace fftg
