#include "factcheck/llm/mock_provider.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace factcheck::llm {

using Json = nlohmann::json;

namespace {

ProviderErrorKind parse_error_kind(const std::string& s) {
  if (s == "network") return ProviderErrorKind::network;
  if (s == "timeout") return ProviderErrorKind::timeout;
  if (s == "http_status" || s == "http") return ProviderErrorKind::http_status;
  if (s == "auth") return ProviderErrorKind::auth;
  if (s == "bad_request") return ProviderErrorKind::bad_request;
  throw FormatError("unknown transcript error kind '" + s + "'");
}

Duration millis(double ms) { return async::seconds(ms / 1000.0); }

}  // namespace

Transcript Transcript::parse(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("transcript is not valid JSON: ") + e.what());
  }
  Transcript t;
  try {
    const Json& list = j.is_array() ? j : j.at("entries");
    if (j.is_object()) t.default_latency = millis(j.value("default_latency_ms", 0.0));
    for (const auto& e : list) {
      TranscriptEntry entry;
      if (auto it = e.find("task"); it != e.end()) entry.task = parse_task(it->get<std::string>());
      if (auto it = e.find("contains"); it != e.end()) {
        if (it->is_string())
          entry.contains.push_back(it->get<std::string>());
        else
          entry.contains = it->get<std::vector<std::string>>();
      }
      if (auto it = e.find("response"); it != e.end())
        entry.response = it->is_string() ? it->get<std::string>() : it->dump();
      if (auto it = e.find("error"); it != e.end()) {
        entry.error = parse_error_kind(it->value("kind", "network"));
        entry.error_status = it->value("status", 0);
        entry.error_message = it->value("message", "scripted " + it->value("kind", std::string("network")) + " error");
      }
      if (auto it = e.find("usage"); it != e.end())
        entry.usage = Usage{it->value("prompt_tokens", std::uint64_t{0}),
                            it->value("completion_tokens", std::uint64_t{0})};
      if (auto it = e.find("latency_ms"); it != e.end()) entry.latency = millis(it->get<double>());
      entry.repeat = e.value("repeat", false);
      t.entries.push_back(std::move(entry));
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed transcript: ") + e.what());
  }
  return t;
}

Transcript Transcript::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open transcript " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

MockProvider::MockProvider(Transcript transcript, std::string name)
    : name_(std::move(name)),
      transcript_(std::move(transcript)),
      consumed_(transcript_.entries.size(), false) {}

MockProvider::MockProvider(Responder responder, Duration latency, std::string name)
    : name_(std::move(name)), responder_(std::move(responder)), responder_latency_(latency) {}

async::Task<Completion> MockProvider::complete(LlmRequest request) {
  auto& loop = async::EventLoop::current();
  const auto started = loop.now();

  if (responder_) {
    {
      std::lock_guard lock(mutex_);
      calls_.push_back({request, started, false});
    }
    co_await async::sleep_for(responder_latency_);
    co_return responder_(request);
  }

  std::optional<TranscriptEntry> chosen;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < transcript_.entries.size(); ++i) {
      const auto& e = transcript_.entries[i];
      if (consumed_[i]) continue;
      if (e.task && *e.task != request.task) continue;
      bool all = true;
      for (const auto& needle : e.contains) {
        if (request.prompt.find(needle) == std::string::npos) {
          all = false;
          break;
        }
      }
      if (!all) continue;
      if (!e.repeat) consumed_[i] = true;
      chosen = e;
      break;
    }
    calls_.push_back({request, started, !chosen || chosen->error.has_value()});
  }

  co_await async::sleep_for(chosen && chosen->latency ? *chosen->latency : transcript_.default_latency);
  if (!chosen)
    throw ProviderError(ProviderErrorKind::bad_request,
                        "mock transcript has no entry for " + std::string(to_string(request.task)) + " request");
  if (chosen->error) throw ProviderError(*chosen->error, chosen->error_message, chosen->error_status);
  co_return Completion{chosen->response, chosen->usage};
}

std::size_t MockProvider::invocations() const {
  std::lock_guard lock(mutex_);
  return calls_.size();
}

std::vector<RecordedCall> MockProvider::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

}  // namespace factcheck::llm
