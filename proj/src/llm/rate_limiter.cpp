#include "factcheck/llm/rate_limiter.hpp"

#include <algorithm>
#include <stdexcept>

namespace factcheck::llm {

SlotDecision acquire_slot(RateLimiterState& state, Timestamp now, int max_requests, Duration window) {
  auto& q = state.queue;
  while (!q.empty() && q.front() <= now - window) q.pop_front();
  if (static_cast<int>(q.size()) < max_requests) {
    q.insert(std::upper_bound(q.begin(), q.end(), now), now);
    return {true, Duration{0}};
  }
  return {false, q.front() + window - now};
}

RateLimiter::RateLimiter(int max_requests, Duration window) : max_requests_(max_requests), window_(window) {
  if (max_requests < 1) throw std::invalid_argument("max_requests must be at least 1");
  if (window <= Duration{0}) throw std::invalid_argument("rate limit window must be positive");
}

RateLimiter::RateLimiter(const ProviderConfig& config)
    : RateLimiter(config.max_requests, async::seconds(config.window)) {}

SlotDecision RateLimiter::try_acquire(Timestamp now) {
  std::lock_guard lock(mutex_);
  return acquire_slot(state_, now, max_requests_, window_);
}

async::Task<void> RateLimiter::acquire() {
  auto& loop = async::EventLoop::current();
  for (;;) {
    const auto d = try_acquire(loop.now());
    if (d.granted) co_return;
    co_await async::sleep_for(d.wait_for);
  }
}

std::vector<Timestamp> RateLimiter::snapshot() const {
  std::lock_guard lock(mutex_);
  return {state_.queue.begin(), state_.queue.end()};
}

}  // namespace factcheck::llm
