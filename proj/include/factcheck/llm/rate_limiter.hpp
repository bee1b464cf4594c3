#pragma once

#include <deque>
#include <mutex>
#include <vector>

#include "factcheck/async/event_loop.hpp"
#include "factcheck/llm/provider.hpp"

namespace factcheck::llm {

using async::Duration;
using async::Timestamp;

/// The traffic queue: grant timestamps, oldest first.
struct RateLimiterState {
  std::deque<Timestamp> queue;
};

struct SlotDecision {
  bool granted = false;
  Duration wait_for{0};
};

/// Prunes entries at or before `now - window`; grants and records `now` if
/// fewer than `max_requests` remain, otherwise reports how long until the
/// oldest surviving entry leaves the window.
SlotDecision acquire_slot(RateLimiterState& state, Timestamp now, int max_requests, Duration window);

inline SlotDecision acquire_slot(RateLimiterState& state, Timestamp now, const ProviderConfig& config) {
  return acquire_slot(state, now, config.max_requests, async::seconds(config.window));
}

/// Thread-safe sliding-window limiter shared by every call to one provider.
class RateLimiter {
 public:
  RateLimiter(int max_requests, Duration window);
  explicit RateLimiter(const ProviderConfig& config);

  SlotDecision try_acquire(Timestamp now);

  /// Waits on the current event loop until a slot is granted.
  async::Task<void> acquire();

  std::vector<Timestamp> snapshot() const;
  int max_requests() const { return max_requests_; }
  Duration window() const { return window_; }

 private:
  int max_requests_;
  Duration window_;
  mutable std::mutex mutex_;
  RateLimiterState state_;
};

}  // namespace factcheck::llm
