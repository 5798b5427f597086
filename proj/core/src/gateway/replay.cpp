#include "counselforge/gateway/replay.hpp"

#include "counselforge/common/jsonl.hpp"
#include "counselforge/gateway/errors.hpp"

namespace counselforge::gateway {

using nlohmann::json;

FixtureRecorder::FixtureRecorder(std::filesystem::path path)
    : path_(std::move(path)) {}

void FixtureRecorder::append(const ChatRequest& request,
                             const ChatResponse& response) {
  json row{{"fingerprint", fingerprint(request)},
           {"request", request},
           {"response", response}};
  std::lock_guard lock(mu_);
  append_jsonl_line(path_, row);
}

ReplayBackend::ReplayBackend(const std::filesystem::path& fixture) {
  for (const auto& row : read_jsonl(fixture)) {
    auto fp = row.at("fingerprint").get<std::string>();
    by_fingerprint_[fp].responses.push_back(row.at("response").get<ChatResponse>());
    ++entries_;
  }
}

TransportReply ReplayBackend::send(const ChatRequest& request) {
  const auto fp = fingerprint(request);
  std::lock_guard lock(mu_);
  auto it = by_fingerprint_.find(fp);
  if (it == by_fingerprint_.end()) {
    throw FixtureMiss("no recorded response for request " + fp.substr(0, 12));
  }
  auto& slot = it->second;
  const auto& resp =
      slot.responses[std::min(slot.served, slot.responses.size() - 1)];
  ++slot.served;
  return TransportReply{200, resp.content, resp.finish_reason, {}};
}

}  // namespace counselforge::gateway
