#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "factcheck/llm/provider.hpp"
#include "factcheck/llm/rate_limiter.hpp"
#include "factcheck/llm/retry.hpp"
#include "factcheck/llm/template.hpp"

namespace factcheck::llm {

/// A provider together with its rate limiter, retry policy and prompt set.
/// Shared by every pipeline run that talks to that provider.
class Gateway {
 public:
  Gateway(std::shared_ptr<LlmProvider> provider, std::shared_ptr<RateLimiter> limiter, RetryPolicy policy,
          std::shared_ptr<const TemplateRegistry> templates = TemplateRegistry::builtin());

  /// Renders the (task, language) template with `bindings` and sends it
  /// through call_with_retry.
  async::Task<CallResult> ask(LlmTask task, std::string language, Bindings bindings, CostAccumulator& cost,
                              Validator validate = {});

  const TemplateRegistry& templates() const { return *templates_; }
  LlmProvider& provider() { return *provider_; }
  RateLimiter& limiter() { return *limiter_; }
  const RetryPolicy& policy() const { return policy_; }

 private:
  std::shared_ptr<LlmProvider> provider_;
  std::shared_ptr<RateLimiter> limiter_;
  RetryPolicy policy_;
  std::shared_ptr<const TemplateRegistry> templates_;
};

/// Builds the client `config.kind` names. Relative transcript paths resolve
/// against `base_dir`.
std::shared_ptr<LlmProvider> make_provider(const ProviderConfig& config, const std::filesystem::path& base_dir = {});

}  // namespace factcheck::llm
