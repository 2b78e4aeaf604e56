#include "fftg/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fftg {

RegionLexicon RegionLexicon::defaults() {
  RegionLexicon lex;
  lex.terms[RegionName::Eyes] = {"eye", "eyes", "eyebrow", "eyebrows", "eyelid", "eyelids"};
  lex.terms[RegionName::Mouth] = {"mouth", "lip", "lips", "lipcolor"};
  lex.terms[RegionName::Nose] = {"nose", "nostril", "nostrils"};
  lex.terms[RegionName::Face] = {"face", "facial", "cheek", "cheeks", "skin", "jaw", "forehead", "chin"};
  return lex;
}

RegionLexicon RegionLexicon::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("lexicon JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "lexicon must be a JSON object");
  RegionLexicon lex;
  for (const auto& [key, value] : doc.items()) {
    const auto region = parse_region(key);
    if (!region) throw Error(ErrorCode::InvalidArgument, "lexicon names unknown region " + key);
    if (!value.is_array()) throw Error(ErrorCode::InvalidArgument, "lexicon terms must be a list");
    for (const auto& term : value) {
      if (!term.is_string()) throw Error(ErrorCode::InvalidArgument, "lexicon terms must be strings");
      lex.terms[*region].insert(term.get<std::string>());
    }
  }
  lex.validate();
  return lex;
}

RegionLexicon RegionLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open lexicon " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void RegionLexicon::validate() const {
  std::set<std::string> seen;
  for (const auto& [region, words] : terms) {
    for (const std::string& w : words) {
      if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
        throw Error(ErrorCode::InvalidArgument, "lexicon term '" + w + "' must be a lowercase word");
      }
      if (!seen.insert(w).second) throw Error(ErrorCode::InvalidArgument, "lexicon term '" + w + "' is listed twice");
    }
  }
}

std::vector<std::string> content_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));

  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i + 4 < tokens.size() && tokens[i] == "this" && tokens[i + 1] == "is" && tokens[i + 2] == "a" &&
        (tokens[i + 3] == "real" || tokens[i + 3] == "fake") && (tokens[i + 4] == "face" || tokens[i + 4] == "person")) {
      i += 4;
      continue;
    }
    out.push_back(std::move(tokens[i]));
  }
  return out;
}

std::set<RegionName> extract_region_mentions(std::string_view text, const RegionLexicon& lexicon) {
  std::set<RegionName> found;
  const auto tokens = content_tokens(text);
  for (const auto& [region, words] : lexicon.terms) {
    for (const std::string& t : tokens) {
      if (words.count(t)) {
        found.insert(region);
        break;
      }
    }
  }
  return found;
}

Prf prf_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) {
  Prf p;
  p.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  p.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  p.f1 = p.precision + p.recall > 0.0 ? 2.0 * p.precision * p.recall / (p.precision + p.recall) : 0.0;
  return p;
}

std::string_view to_string(Averaging a) { return a == Averaging::Micro ? "micro" : "macro"; }

std::optional<Averaging> parse_averaging(std::string_view s) {
  if (s == "micro") return Averaging::Micro;
  if (s == "macro") return Averaging::Macro;
  return std::nullopt;
}

EvalReport score_annotations(const std::vector<ScoredRecord>& records, const RegionLexicon& lexicon,
                             Averaging averaging) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to score");
  EvalReport report;
  report.averaging = averaging;
  Prf macro_sum;
  for (const ScoredRecord& rec : records) {
    RecordScore score;
    score.mentioned = extract_region_mentions(rec.text, lexicon);
    for (RegionName r : kRegionOrder) {
      const bool said = score.mentioned.count(r) > 0;
      const bool truth = rec.truth.count(r) > 0;
      Confusion& region = report.per_region[static_cast<std::size_t>(r)];
      if (said && truth) {
        ++score.counts.tp;
        ++region.tp;
      } else if (said) {
        ++score.counts.fp;
        ++region.fp;
      } else if (truth) {
        ++score.counts.fn;
        ++region.fn;
      }
    }
    score.prf = prf_from_counts(score.counts.tp, score.counts.fp, score.counts.fn);
    report.totals.tp += score.counts.tp;
    report.totals.fp += score.counts.fp;
    report.totals.fn += score.counts.fn;
    macro_sum.precision += score.prf.precision;
    macro_sum.recall += score.prf.recall;
    macro_sum.f1 += score.prf.f1;
    report.records.push_back(std::move(score));
  }
  if (averaging == Averaging::Micro) {
    report.aggregate = prf_from_counts(report.totals.tp, report.totals.fp, report.totals.fn);
  } else {
    const double n = static_cast<double>(records.size());
    report.aggregate = {macro_sum.precision / n, macro_sum.recall / n, macro_sum.f1 / n};
  }
  return report;
}

std::string report_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["averaging"] = std::string(to_string(report.averaging));
  doc["precision"] = report.aggregate.precision;
  doc["recall"] = report.aggregate.recall;
  doc["f1"] = report.aggregate.f1;
  doc["records"] = report.records.size();
  doc["totals"] = {{"tp", report.totals.tp}, {"fp", report.totals.fp}, {"fn", report.totals.fn}};
  nlohmann::json regions = nlohmann::json::object();
  for (RegionName r : kRegionOrder) {
    const Confusion& c = report.per_region[static_cast<std::size_t>(r)];
    regions[std::string(to_string(r))] = {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}};
  }
  doc["per_region"] = regions;
  return doc.dump(2);
}

std::string report_table(const EvalReport& report) {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-8s %6s %6s %6s %9s %9s %9s\n", "region", "TP", "FP", "FN", "precision", "recall", "F1");
  out += line;
  auto row = [&](std::string_view name, const Confusion& c, const Prf& p) {
    std::snprintf(line, sizeof line, "%-8.*s %6zu %6zu %6zu %9.4f %9.4f %9.4f\n", static_cast<int>(name.size()),
                  name.data(), c.tp, c.fp, c.fn, p.precision, p.recall, p.f1);
    out += line;
  };
  for (RegionName r : kRegionOrder) {
    const Confusion& c = report.per_region[static_cast<std::size_t>(r)];
    row(to_string(r), c, prf_from_counts(c.tp, c.fp, c.fn));
  }
  row(report.averaging == Averaging::Micro ? "micro" : "macro", report.totals, report.aggregate);
  return out;
}

std::optional<Label> decisive_label(std::string_view response) {
  std::string cur;
  auto decide = [](const std::string& word) -> std::optional<Label> {
    if (word == "real") return Label::Real;
    if (word == "fake") return Label::Fake;
    return std::nullopt;
  };
  for (char ch : response) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    if (auto l = decide(cur)) return l;
    cur.clear();
  }
  return decide(cur);
}

double response_accuracy(const std::vector<std::string>& responses, const std::vector<Label>& labels) {
  if (responses.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "responses and labels differ in length");
  if (responses.empty()) throw Error(ErrorCode::EmptyInput, "no responses to score");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto decided = decisive_label(responses[i]);
    if (decided && *decided == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(responses.size());
}

}  // namespace fftg
