#pragma once

// Scripted local HTTP server that speaks just enough of the chat-completions
// envelope for client tests.

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

namespace stub {

struct Reply {
  int status = 200;
  std::string body;
  int delay_ms = 0;
};

// Wraps assistant text in a chat-completion response.
inline std::string envelope(const std::string& content, const std::string& model = "stub-model") {
  nlohmann::json doc = {{"model", model},
                        {"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
  return doc.dump();
}

class Server {
 public:
  // `script` receives the zero-based call index and the request body.
  using Script = std::function<Reply(int, const std::string&)>;

  explicit Server(Script script) : script_(std::move(script)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++in_flight_;
      int prev = max_in_flight_.load();
      while (now > prev && !max_in_flight_.compare_exchange_weak(prev, now)) {
      }
      int index;
      {
        std::lock_guard lock(mu_);
        index = static_cast<int>(bodies_.size());
        bodies_.push_back(req.body);
        auth_.push_back(req.get_header_value("Authorization"));
      }
      const Reply r = script_(index, req.body);
      if (r.delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(r.delay_ms));
      res.status = r.status;
      res.set_content(r.body, "application/json");
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~Server() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  int calls() const {
    std::lock_guard lock(mu_);
    return static_cast<int>(bodies_.size());
  }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mu_);
    return bodies_;
  }
  std::vector<std::string> auth_headers() const {
    std::lock_guard lock(mu_);
    return auth_;
  }
  int max_in_flight() const { return max_in_flight_.load(); }

 private:
  Script script_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
  std::vector<std::string> auth_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
};

}  // namespace stub
