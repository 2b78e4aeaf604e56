#include "fftg/annotate.hpp"

namespace fftg {

std::string_view to_string(Label l) { return l == Label::Real ? "real" : "fake"; }

std::optional<Label> parse_label(std::string_view s) {
  if (s == "real") return Label::Real;
  if (s == "fake") return Label::Fake;
  return std::nullopt;
}

std::string_view to_string(Subject s) { return s == Subject::Face ? "face" : "person"; }

std::string mandatory_phrase(Label label, Subject subject) {
  return "This is a " + std::string(to_string(label)) + " " + std::string(to_string(subject));
}

BlendClauses blend_clauses(const TypeEvidence& ev) {
  auto hit = [&](std::string_view name) { return ev.metric(name).value_or(0.0) > 0.5; };
  return {hit("gradient_hit"), hit("edge_hit"), hit("frequency_hit")};
}

std::string phrase_for(RegionName region, ForgeryType type, BlendClauses clauses) {
  const std::string head = "the " + std::string(to_string(region));
  switch (type) {
    case ForgeryType::ColorDifference: return head + " has inconsistent colors";
    case ForgeryType::Blur: return head + " appears blurry compared to natural faces";
    case ForgeryType::TextureAbnormal: return head + " lacks natural texture";
    case ForgeryType::StructureAbnormal: return head + " shows structural distortion deviating from natural appearance";
    case ForgeryType::BlendBoundary: {
      std::vector<std::string_view> parts;
      if (clauses.gradient) parts.push_back("sharp changes in image gradients at the boundaries");
      if (clauses.edge) parts.push_back("unnatural edge patterns");
      if (clauses.frequency) parts.push_back("unusual frequency patterns at the boundaries");
      std::string text = head + " shows blending artifacts";
      if (parts.empty()) return text;
      text += " characterized by ";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) text += i + 1 == parts.size() ? " and " : ", ";
        text += parts[i];
      }
      return text;
    }
  }
  throw Error(ErrorCode::UnknownType, "no phrase for forgery type");
}

std::string phrase_for(RegionName region, const TypeEvidence& ev) {
  return phrase_for(region, ev.type, ev.type == ForgeryType::BlendBoundary ? blend_clauses(ev) : BlendClauses{});
}

std::string phrase_for(std::string_view region, std::string_view type) {
  const auto r = parse_region(region);
  if (!r) throw Error(ErrorCode::InvalidArgument, "unknown region " + std::string(region));
  const auto t = parse_forgery_type(type);
  if (!t) throw Error(ErrorCode::UnknownType, "unknown forgery type " + std::string(type));
  return phrase_for(*r, *t);
}

RawAnnotation build_raw_annotation(const ForgeryRegionList& regions,
                                   const std::vector<std::vector<TypeEvidence>>& evidence, Label label,
                                   Subject subject) {
  RawAnnotation out;
  out.label = label;
  if (label == Label::Real) {
    out.full_text = mandatory_phrase(label, subject) + ".";
    return out;
  }
  if (evidence.size() != regions.size()) {
    throw Error(ErrorCode::LengthMismatch, "one evidence list per forgery region is required");
  }
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (ForgeryType type : kTypeOrder) {
      for (const TypeEvidence& ev : evidence[i]) {
        if (ev.type != type || !ev.triggered) continue;
        out.statements.push_back({regions[i].region, type, phrase_for(regions[i].region, ev)});
        break;
      }
    }
  }
  out.low_evidence = out.statements.empty();
  out.full_text = mandatory_phrase(label, subject);
  for (std::size_t i = 0; i < out.statements.size(); ++i) {
    out.full_text += i == 0 ? ", " : "; ";
    out.full_text += out.statements[i].text;
  }
  out.full_text += ".";
  return out;
}

}  // namespace fftg
