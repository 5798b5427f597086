#include "counselforge/gateway/rate_limiter.hpp"

#include <thread>

namespace counselforge::gateway {

RateLimiter::RateLimiter(double requests_per_second) : rate_(requests_per_second) {
  if (rate_ > 0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / rate_));
  }
}

void RateLimiter::acquire() {
  if (rate_ <= 0) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = next_slot_ > now ? next_slot_ : now;
    next_slot_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

}  // namespace counselforge::gateway
