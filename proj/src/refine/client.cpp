#include <cmath>
#include <cstdlib>
#include <semaphore>
#include <thread>

#include "fftg/digest.hpp"
#include "fftg/png_io.hpp"
#include "fftg/refine.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fftg {

using nlohmann::json;

void ServiceConfig::validate() const {
  if (endpoint.empty()) throw Error(ErrorCode::Config, "refine endpoint must be set");
  if (model.empty()) throw Error(ErrorCode::Config, "refine model must be set");
  if (!(timeout_seconds > 0.0)) throw Error(ErrorCode::Config, "refine timeout must be positive");
  if (retries < 0) throw Error(ErrorCode::Config, "refine retries must be >= 0");
  if (backoff_ms < 0) throw Error(ErrorCode::Config, "refine backoff must be >= 0");
  if (max_concurrent < 1 || max_concurrent > 1024) throw Error(ErrorCode::Config, "refine concurrency must be in [1,1024]");
}

ServiceConfig& ServiceConfig::with_env_credential() {
  if (const char* key = std::getenv("FFTG_API_KEY")) credential = key;
  return *this;
}

std::string_view to_string(CaptionSource s) { return s == CaptionSource::Remote ? "remote" : "fallback_raw"; }

namespace {

json user_message(const PromptBundle& bundle) {
  json content = json::array();
  content.push_back({{"type", "text"}, {"text", bundle.task + "\n" + bundle.guide + "\n" + bundle.predefined}});
  if (!bundle.visual.empty()) {
    const auto png = io::encode_png(bundle.visual);
    content.push_back(
        {{"type", "image_url"}, {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
  }
  return {{"role", "user"}, {"content", std::move(content)}};
}

json request_json(std::string_view model, json messages) {
  return {{"model", std::string(model)}, {"messages", std::move(messages)}};
}

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw Error(ErrorCode::Config, "endpoint needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

enum class Outcome { Ok, Retryable, Fatal };

struct Reply {
  Outcome outcome = Outcome::Fatal;
  std::string content;
  std::string model;
  std::string failure;
};

}  // namespace

std::string build_request_body(const PromptBundle& bundle, std::string_view model) {
  return request_json(model, json::array({user_message(bundle)})).dump();
}

struct RefineClient::Impl {
  explicit Impl(int permits) : slots(permits) {}
  std::counting_semaphore<1024> slots;
};

RefineClient::RefineClient(ServiceConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  impl_ = std::make_unique<Impl>(cfg_.max_concurrent);
}

RefineClient::~RefineClient() = default;

namespace {

Reply post_once(const ServiceConfig& cfg, std::counting_semaphore<1024>& slots, const std::string& body) {
  const Endpoint ep = split_endpoint(cfg.endpoint);
  httplib::Client client(ep.origin);
  const auto timeout = std::chrono::microseconds(static_cast<long long>(std::llround(cfg.timeout_seconds * 1e6)));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!cfg.credential.empty()) headers.emplace("Authorization", "Bearer " + cfg.credential);

  struct Permit {
    std::counting_semaphore<1024>& s;
    explicit Permit(std::counting_semaphore<1024>& sem) : s(sem) { s.acquire(); }
    ~Permit() { s.release(); }
  };
  httplib::Result res = [&] {
    Permit permit(slots);
    return client.Post(ep.path, headers, body, "application/json");
  }();

  Reply reply;
  if (!res) {
    reply.outcome = Outcome::Retryable;
    reply.failure = "transport: " + httplib::to_string(res.error());
    return reply;
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    reply.failure = "auth: HTTP " + std::to_string(status);
    return reply;
  }
  if (status == 429 || status >= 500) {
    reply.outcome = Outcome::Retryable;
    reply.failure = "HTTP " + std::to_string(status);
    return reply;
  }
  if (status < 200 || status >= 300) {
    reply.failure = "HTTP " + std::to_string(status);
    return reply;
  }
  reply.outcome = Outcome::Ok;
  const json doc = json::parse(res->body, nullptr, false);
  if (!doc.is_discarded() && doc.is_object()) {
    if (auto m = doc.find("model"); m != doc.end() && m->is_string()) reply.model = m->get<std::string>();
    const json* content = nullptr;
    if (auto ch = doc.find("choices"); ch != doc.end() && ch->is_array() && !ch->empty()) {
      const json& first = (*ch)[0];
      if (first.is_object() && first.contains("message") && first["message"].is_object() &&
          first["message"].contains("content")) {
        content = &first["message"]["content"];
      }
    }
    if (content && content->is_string()) reply.content = content->get<std::string>();
  }
  return reply;
}

// Sends with retry and exponential backoff. Counts every HTTP attempt.
Reply post_with_retry(const ServiceConfig& cfg, std::counting_semaphore<1024>& slots, const std::string& body,
                      int& attempts) {
  Reply reply;
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    if (attempt > 0 && cfg.backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long long>(cfg.backoff_ms) << (attempt - 1)));
    }
    ++attempts;
    reply = post_once(cfg, slots, body);
    if (reply.outcome != Outcome::Retryable) return reply;
  }
  reply.failure = "retries exhausted: " + reply.failure;
  return reply;
}

}  // namespace

RefinedAnnotation RefineClient::refine(const PromptBundle& bundle) noexcept {
  RefinedAnnotation out;
  out.model_id = cfg_.model;
  try {
    json messages = json::array({user_message(bundle)});
    const std::string body = request_json(cfg_.model, messages).dump();
    out.request_digest = sha256_hex(body);

    Reply reply = post_with_retry(cfg_, impl_->slots, body, out.attempts);
    for (int round = 0; round < 2 && reply.outcome == Outcome::Ok; ++round) {
      if (!reply.model.empty()) out.model_id = reply.model;
      try {
        out.captions = parse_and_validate_response(reply.content, bundle.label, bundle.k, bundle.subject);
        out.source = CaptionSource::Remote;
        out.failure.clear();
        return out;
      } catch (const Error& e) {
        out.failure = "schema: " + std::string(e.what());
      }
      if (round == 1) break;
      messages.push_back({{"role", "assistant"}, {"content", reply.content}});
      messages.push_back({{"role", "user"},
                          {"content", "Your previous reply was rejected (" + out.failure +
                                          "). Reply again with only the JSON object, following the output format "
                                          "exactly.\n" +
                                          bundle.predefined}});
      reply = post_with_retry(cfg_, impl_->slots, request_json(cfg_.model, messages).dump(), out.attempts);
    }
    if (reply.outcome != Outcome::Ok) out.failure = reply.failure;
  } catch (const std::exception& e) {
    out.failure = e.what();
  } catch (...) {
    out.failure = "unknown error";
  }
  out.source = CaptionSource::FallbackRaw;
  try {
    out.captions = {bundle.raw_text};
  } catch (...) {
    out.captions.clear();
  }
  return out;
}

RefinedAnnotation refine_annotation(const PromptBundle& bundle, const ServiceConfig& cfg) noexcept {
  try {
    RefineClient client(cfg);
    return client.refine(bundle);
  } catch (const std::exception& e) {
    RefinedAnnotation out;
    out.model_id = cfg.model;
    out.failure = e.what();
    try {
      out.captions = {bundle.raw_text};
    } catch (...) {
    }
    return out;
  }
}

}  // namespace fftg
