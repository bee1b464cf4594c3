#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "factcheck/async/event_loop.hpp"
#include "factcheck/core/error.hpp"
#include "factcheck/llm/provider.hpp"

namespace factcheck::llm {

using async::Duration;

/// One scripted exchange. An entry matches a request when its task (if set)
/// equals the request's and every `contains` string occurs in the prompt.
/// Exactly one of `response` and `error` is meaningful.
struct TranscriptEntry {
  std::optional<LlmTask> task;
  std::vector<std::string> contains;
  std::string response;
  std::optional<ProviderErrorKind> error;
  int error_status = 0;
  std::string error_message;
  std::optional<Usage> usage;
  std::optional<Duration> latency;
  bool repeat = false;  // stays available after being used
};

/// Ordered request-matcher -> scripted response list.
///
/// File format (JSON):
///   {"default_latency_ms": 0,
///    "entries": [{"task": "decompose", "contains": ["Mary"],
///                 "response": "{\"claims\": [...]}" | {...json...},
///                 "usage": {"prompt_tokens": 10, "completion_tokens": 5},
///                 "latency_ms": 100, "repeat": false},
///                {"task": "verify", "error": {"kind": "timeout"}}]}
/// A `response` given as a JSON value is serialized compactly.
struct Transcript {
  std::vector<TranscriptEntry> entries;
  Duration default_latency{0};

  static Transcript load(const std::filesystem::path& path);
  static Transcript parse(const std::string& json_text);
};

struct RecordedCall {
  LlmRequest request;
  async::Timestamp started;
  bool failed = false;
};

/// Offline provider. Either replays a Transcript (each non-repeating entry is
/// consumed by the first request that matches it) or calls a responder
/// function. Latency is spent with async::sleep_for, so on a simulated loop
/// it costs no real time.
class MockProvider final : public LlmProvider {
 public:
  using Responder = std::function<Completion(const LlmRequest&)>;

  explicit MockProvider(Transcript transcript, std::string name = "mock");
  MockProvider(Responder responder, Duration latency, std::string name = "mock");

  std::string name() const override { return name_; }
  async::Task<Completion> complete(LlmRequest request) override;

  std::size_t invocations() const;
  std::vector<RecordedCall> calls() const;

 private:
  std::string name_;
  Transcript transcript_;
  std::vector<bool> consumed_;
  Responder responder_;
  Duration responder_latency_{0};
  mutable std::mutex mutex_;
  std::vector<RecordedCall> calls_;
};

}  // namespace factcheck::llm
