#include "factcheck/llm/retry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "factcheck/core/error.hpp"

namespace factcheck::llm {

bool default_retryable(const std::exception& e) {
  if (dynamic_cast<const ParseFailure*>(&e)) return true;
  if (auto* p = dynamic_cast<const ProviderError*>(&e)) {
    switch (p->kind) {
      case ProviderErrorKind::network:
      case ProviderErrorKind::timeout:
        return true;
      case ProviderErrorKind::http_status:
        return p->http_status == 429 || p->http_status >= 500;
      case ProviderErrorKind::auth:
      case ProviderErrorKind::bad_request:
        return false;
    }
  }
  return false;
}

Duration RetryPolicy::delay_after(int attempt) const {
  return async::seconds(base_delay * std::pow(backoff_factor, attempt - 1));
}

void RetryPolicy::validate() const {
  if (max_attempts < 1) throw std::invalid_argument("retry max_attempts must be >= 1");
  if (base_delay < 0.0) throw std::invalid_argument("retry base_delay must be >= 0");
  if (backoff_factor < 1.0) throw std::invalid_argument("retry backoff_factor must be >= 1");
}

void CostAccumulator::add_llm_invocation() {
  std::lock_guard lock(mutex_);
  ++llm_invocations_;
}

void CostAccumulator::add_tokens(std::uint64_t prompt, std::uint64_t completion, bool estimated) {
  std::lock_guard lock(mutex_);
  record_.prompt_tokens += prompt;
  record_.completion_tokens += completion;
  record_.tokens_estimated = record_.tokens_estimated || estimated;
}

void CostAccumulator::add_web_query() {
  std::lock_guard lock(mutex_);
  ++record_.web_queries;
}

std::uint64_t CostAccumulator::llm_invocations() const {
  std::lock_guard lock(mutex_);
  return llm_invocations_;
}

CostRecord CostAccumulator::snapshot(double wall_time_seconds) const {
  std::lock_guard lock(mutex_);
  auto r = record_;
  r.wall_time = wall_time_seconds;
  return r;
}

async::Task<CallResult> call_with_retry(LlmProvider& provider, LlmRequest request,
                                        const RetryPolicy& policy, RateLimiter& limiter,
                                        CostAccumulator* cost, Validator validate) {
  std::string last_error = "no attempt made";
  const int max_attempts = std::max(policy.max_attempts, 1);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    co_await limiter.acquire();
    if (cost) cost->add_llm_invocation();

    std::exception_ptr failure;
    try {
      auto completion = co_await provider.complete(request);
      CallResult result;
      result.text = std::move(completion.text);
      result.attempts = attempt;
      if (completion.usage) {
        result.prompt_tokens = completion.usage->prompt_tokens;
        result.completion_tokens = completion.usage->completion_tokens;
      } else {
        result.prompt_tokens = estimate_tokens(request.prompt);
        result.completion_tokens = estimate_tokens(result.text);
        result.tokens_estimated = true;
      }
      // Tokens are spent whether or not the output turns out to be usable.
      if (cost) cost->add_tokens(result.prompt_tokens, result.completion_tokens, result.tokens_estimated);
      if (validate) validate(result.text);
      co_return result;
    } catch (...) {
      failure = std::current_exception();
    }

    try {
      std::rethrow_exception(failure);
    } catch (const std::exception& e) {
      const bool retry = policy.retryable ? policy.retryable(e) : default_retryable(e);
      if (!retry) throw NonRetryable(e.what(), attempt);
      last_error = e.what();
    }
    if (attempt < max_attempts) co_await async::sleep_for(policy.delay_after(attempt));
  }
  throw ExhaustedRetries(max_attempts, last_error);
}

}  // namespace factcheck::llm
