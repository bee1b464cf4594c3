#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "factcheck/async/task.hpp"
#include "factcheck/llm/template.hpp"

namespace factcheck::llm {

/// One LLM endpoint. `kind` selects the client ("openai" for any
/// chat-completions compatible server, "mock" for a scripted transcript).
struct ProviderConfig {
  std::string name;
  std::string kind = "openai";
  std::string endpoint;
  std::string model;
  std::string credential_ref;  // name of the environment variable holding the key
  int max_requests = 60;
  double window = 60.0;   // seconds
  double timeout = 60.0;  // seconds
  std::string transcript;  // mock only: path of the transcript file

  /// Throws std::invalid_argument on max_requests < 1 or window <= 0.
  void validate() const;
};

struct LlmRequest {
  LlmTask task = LlmTask::decompose;
  std::string language = "en";
  std::string prompt;
};

struct Usage {
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

struct Completion {
  std::string text;
  std::optional<Usage> usage;  // absent when the provider did not report it
};

class LlmProvider {
 public:
  virtual ~LlmProvider() = default;
  virtual std::string name() const = 0;
  /// Throws ProviderError on transport or HTTP failures.
  virtual async::Task<Completion> complete(LlmRequest request) = 0;
};

/// ceil(chars / 4), the fallback when a provider reports no usage.
std::uint64_t estimate_tokens(std::string_view text);

}  // namespace factcheck::llm
