#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "factcheck/async/event_loop.hpp"
#include "factcheck/core/types.hpp"
#include "factcheck/llm/retry.hpp"

namespace factcheck::retrieval {

struct DirectAnswer {
  std::string text;
  std::string source_url;
  std::string title;

  bool operator==(const DirectAnswer&) const = default;
};

struct OrganicResult {
  std::string title;
  std::string url;
  std::string snippet;

  bool operator==(const OrganicResult&) const = default;
};

struct SearchResponse {
  std::optional<DirectAnswer> direct_answer;
  std::vector<OrganicResult> organic;  // provider order

  bool operator==(const SearchResponse&) const = default;
};

/// Parses a Serper `/search` response body. The answer box (`answerBox`:
/// `answer` or else `snippet`, plus `title`/`link`) becomes the direct
/// answer; `organic` entries keep `title`/`link`/`snippet`. Throws
/// MalformedResponse if the body is not a JSON object or a field has the
/// wrong type.
SearchResponse parse_serper_response(const std::string& body);

class SearchClient {
 public:
  virtual ~SearchClient() = default;
  /// One attempt. Throws FixtureNotFound (never reached the wire),
  /// ProviderError (transport/HTTP), or MalformedResponse.
  virtual async::Task<SearchResponse> fetch(std::string query) = 0;
};

/// Replays recorded Serper responses.
///
/// Every `*.json` file under the fixture directory holds either one record
/// `{"query": "...", "response": {<serper body>}}` or a list of them. A record
/// whose query is "*" answers any query without its own record.
class RecordedSearch final : public SearchClient {
 public:
  explicit RecordedSearch(std::map<std::string, std::string> bodies, async::Duration latency = {});
  static std::shared_ptr<RecordedSearch> from_directory(const std::filesystem::path& dir,
                                                        async::Duration latency = {});

  async::Task<SearchResponse> fetch(std::string query) override;
  std::vector<std::string> queries_seen() const;

 private:
  std::map<std::string, std::string> bodies_;
  async::Duration latency_;
  mutable std::mutex mutex_;
  std::vector<std::string> seen_;
};

/// Serper-compatible live client: POST {endpoint} with header
/// `X-API-KEY: $<credential_ref>` and body `{"q": query}`.
class SerperSearch final : public SearchClient {
 public:
  SerperSearch(std::string endpoint, std::string credential_ref, double timeout_seconds = 30.0);
  async::Task<SearchResponse> fetch(std::string query) override;

 private:
  std::string endpoint_;
  std::string credential_ref_;
  double timeout_;
};

/// Runs `client.fetch` under `policy`. `cost.web_queries` grows once per
/// attempt that reached the wire. Throws ExhaustedRetries, NonRetryable or
/// MalformedResponse. `attempts`, when given, receives the same count.
async::Task<SearchResponse> search(SearchClient& client, SearchQuery query, const llm::RetryPolicy& policy,
                                   llm::CostAccumulator* cost = nullptr, int* attempts = nullptr);

}  // namespace factcheck::retrieval
