#include <optional>

#include "fftg/refine.hpp"
#include "json.hpp"

namespace fftg {

namespace {

[[noreturn]] void schema_fail(std::string_view reason, const std::string& detail = {}) {
  std::string msg(reason);
  if (!detail.empty()) msg += ": " + detail;
  throw Error(ErrorCode::SchemaError, msg);
}

// End offset (exclusive) of the balanced object starting at body[start], or npos.
std::size_t object_end(std::string_view body, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < body.size(); ++i) {
    const char c = body[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<nlohmann::json> first_object(std::string_view body) {
  for (std::size_t pos = body.find('{'); pos != std::string_view::npos; pos = body.find('{', pos + 1)) {
    const std::size_t end = object_end(body, pos);
    if (end == std::string_view::npos) continue;
    auto doc = nlohmann::json::parse(body.substr(pos, end - pos), nullptr, false);
    if (!doc.is_discarded() && doc.is_object()) return doc;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> parse_and_validate_response(std::string_view body, Label label, int k, Subject subject) {
  const auto doc = first_object(body);
  if (!doc) schema_fail("no_json_object");
  const auto is_fake = doc->find("is_fake");
  if (is_fake == doc->end() || !is_fake->is_boolean()) schema_fail("missing_is_fake");
  if (is_fake->get<bool>() != (label == Label::Fake)) schema_fail("label_mismatch");
  const auto caps = doc->find("captions");
  if (caps == doc->end() || !caps->is_array()) schema_fail("missing_captions");
  std::vector<std::string> captions;
  for (const auto& c : *caps) {
    if (!c.is_string()) schema_fail("caption_not_string");
    captions.push_back(c.get<std::string>());
  }
  if (static_cast<int>(captions.size()) != k) {
    schema_fail("caption_count", "expected " + std::to_string(k) + ", got " + std::to_string(captions.size()));
  }
  const std::string phrase = mandatory_phrase(label, subject);
  for (std::size_t i = 0; i < captions.size(); ++i) {
    if (captions[i].find(phrase) == std::string::npos) schema_fail("missing_phrase", "caption " + std::to_string(i));
  }
  return captions;
}

std::string schema_reason(const Error& e) {
  std::string_view msg = e.what();
  const std::string_view prefix = "SchemaError: ";
  if (e.code() != ErrorCode::SchemaError || msg.substr(0, prefix.size()) != prefix) return {};
  msg.remove_prefix(prefix.size());
  return std::string(msg.substr(0, msg.find(':')));
}

}  // namespace fftg
