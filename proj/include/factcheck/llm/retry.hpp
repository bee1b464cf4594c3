#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <string>

#include "factcheck/async/task.hpp"
#include "factcheck/core/types.hpp"
#include "factcheck/llm/provider.hpp"
#include "factcheck/llm/rate_limiter.hpp"

namespace factcheck::llm {

/// Network errors, timeouts, HTTP 429/5xx, and ParseFailure.
bool default_retryable(const std::exception& e);

struct RetryPolicy {
  int max_attempts = 3;
  double base_delay = 1.0;  // seconds before the second attempt
  double backoff_factor = 2.0;
  std::function<bool(const std::exception&)> retryable = default_retryable;

  /// Delay after failed attempt `attempt` (1-based).
  Duration delay_after(int attempt) const;
  void validate() const;
};

/// Per-run cost counters. Every LLM and search attempt that reaches a
/// provider is recorded here; the fields mirror CostRecord.
class CostAccumulator {
 public:
  void add_llm_invocation();
  void add_tokens(std::uint64_t prompt, std::uint64_t completion, bool estimated);
  void add_web_query();

  std::uint64_t llm_invocations() const;
  CostRecord snapshot(double wall_time_seconds) const;

 private:
  mutable std::mutex mutex_;
  std::uint64_t llm_invocations_ = 0;
  CostRecord record_;
};

struct CallResult {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  bool tokens_estimated = false;
  int attempts = 0;
};

/// Called on each completion before it is accepted; throw ParseFailure to
/// have the attempt retried.
using Validator = std::function<void(const std::string&)>;

/// Acquires a limiter slot before every attempt. Returns the first completion
/// that passes `validate`. Throws NonRetryable at once for errors the policy
/// does not retry, and ExhaustedRetries after `max_attempts` failures.
async::Task<CallResult> call_with_retry(LlmProvider& provider, LlmRequest request,
                                        const RetryPolicy& policy, RateLimiter& limiter,
                                        CostAccumulator* cost = nullptr, Validator validate = {});

}  // namespace factcheck::llm
