#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "counselforge/gateway/transport.hpp"

namespace counselforge::gateway {

/// Appends {fingerprint, request, response} lines to a JSON Lines fixture.
class FixtureRecorder {
 public:
  explicit FixtureRecorder(std::filesystem::path path);
  void append(const ChatRequest& request, const ChatResponse& response);
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::mutex mu_;
  std::filesystem::path path_;
};

/// Serves recorded responses keyed by request fingerprint. A fingerprint
/// recorded several times is answered with its responses in recorded order,
/// the last one repeating.
class ReplayBackend final : public Transport {
 public:
  explicit ReplayBackend(const std::filesystem::path& fixture);

  TransportReply send(const ChatRequest& request) override;
  std::size_t entry_count() const noexcept { return entries_; }

 private:
  struct Slot {
    std::vector<ChatResponse> responses;
    std::size_t served = 0;
  };
  std::mutex mu_;
  std::map<std::string, Slot> by_fingerprint_;
  std::size_t entries_ = 0;
};

}  // namespace counselforge::gateway
