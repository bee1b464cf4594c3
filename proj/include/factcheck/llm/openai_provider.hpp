#pragma once

#include <string>

#include "factcheck/llm/provider.hpp"

namespace factcheck::llm {

/// Client for chat-completions style endpoints.
///
/// Request:  POST {endpoint}
///           Authorization: Bearer $<credential_ref>
///           {"model": <model>, "temperature": 0,
///            "messages": [{"role": "user", "content": <prompt>}]}
/// Response: {"choices": [{"message": {"content": "..."}}],
///            "usage": {"prompt_tokens": n, "completion_tokens": m}}
class OpenAiProvider final : public LlmProvider {
 public:
  explicit OpenAiProvider(ProviderConfig config);

  std::string name() const override { return config_.name; }
  async::Task<Completion> complete(LlmRequest request) override;

  std::string request_body(const LlmRequest& request) const;

  /// Maps an HTTP status/body to a Completion or throws ProviderError.
  static Completion parse_response(int status, const std::string& body);

 private:
  ProviderConfig config_;
};

}  // namespace factcheck::llm
