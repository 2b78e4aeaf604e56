#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fftg/detectors.hpp"
#include "fftg/region.hpp"

namespace fftg {

enum class Label { Real, Fake };
std::string_view to_string(Label l);
std::optional<Label> parse_label(std::string_view s);

// Noun used in the mandatory phrase: "This is a fake face" / "... person".
enum class Subject { Face, Person };
std::string_view to_string(Subject s);

// "This is a real face" / "This is a fake face" (no trailing punctuation).
std::string mandatory_phrase(Label label, Subject subject = Subject::Face);

struct BlendClauses {
  bool gradient = false;
  bool edge = false;
  bool frequency = false;
};
BlendClauses blend_clauses(const TypeEvidence& ev);

std::string phrase_for(RegionName region, ForgeryType type, BlendClauses clauses = {});
std::string phrase_for(RegionName region, const TypeEvidence& ev);
// String form; throws UnknownType / InvalidArgument on names outside the tables.
std::string phrase_for(std::string_view region, std::string_view type);

struct Statement {
  RegionName region;
  ForgeryType type;
  std::string text;

  friend bool operator==(const Statement&, const Statement&) = default;
};

struct RawAnnotation {
  Label label = Label::Real;
  std::vector<Statement> statements;
  std::string full_text;
  bool low_evidence = false;  // fake label without any triggered type

  friend bool operator==(const RawAnnotation&, const RawAnnotation&) = default;
};

// evidence[i] belongs to regions[i]. Statements are region-major in list
// order, types in kTypeOrder; only triggered evidence is rendered.
RawAnnotation build_raw_annotation(const ForgeryRegionList& regions,
                                   const std::vector<std::vector<TypeEvidence>>& evidence, Label label,
                                   Subject subject = Subject::Face);

}  // namespace fftg
