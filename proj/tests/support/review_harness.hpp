#pragma once

#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "counselforge/review/review_server.hpp"
#include "counselforge/review/review_store.hpp"
#include "counselforge/quality/scoring.hpp"
#include "test_support.hpp"

namespace cftest {

/// ReviewServer on an ephemeral loopback port, served from a background thread.
class RunningReviewServer {
 public:
  explicit RunningReviewServer(counselforge::review::ReviewStore& store) : server_(store) {
    port_ = server_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_.serve(); });
  }
  ~RunningReviewServer() {
    server_.stop();
    thread_.join();
  }
  int port() const noexcept { return port_; }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(5);
    c.set_read_timeout(10);
    return c;
  }

 private:
  counselforge::review::ReviewServer server_;
  int port_ = 0;
  std::thread thread_;
};

inline nlohmann::json decision_body(const std::string& action, std::size_t revision) {
  return nlohmann::json{{"action", action}, {"expected_revision", revision}, {"editor_label", "tester"}};
}

/// A four-turn session plus one low-realism flag.
inline std::pair<counselforge::ingest::SessionTranscript, std::vector<counselforge::quality::Flag>>
flagged_session(const std::string& id) {
  auto s = make_session(id, {"I cannot sleep at all lately.", "What keeps you awake?",
                             "Worry about my job.", "Let's look at those worries together."},
                        counselforge::ingest::Source::synthetic);
  std::vector<counselforge::quality::Flag> flags{
      {id, counselforge::quality::FlagReason::low_realism, "realism 4 < 6"}};
  return {s, flags};
}

}  // namespace cftest
