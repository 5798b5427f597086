#pragma once

#include <chrono>
#include <mutex>

namespace counselforge::gateway {

/// Spaces request starts at least 1/rate seconds apart across all threads.
/// A rate of 0 (or less) never blocks.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_second);

  void acquire();
  double rate() const noexcept { return rate_; }

 private:
  double rate_;
  std::chrono::steady_clock::duration interval_{};
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_slot_{};
};

}  // namespace counselforge::gateway
