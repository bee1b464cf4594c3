#include "factcheck/retrieval/search.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "factcheck/core/error.hpp"
#include "factcheck/net/http.hpp"

namespace factcheck::retrieval {

using Json = nlohmann::json;

namespace {

std::string string_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw MalformedResponse(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

SearchResponse parse_serper_response(const std::string& body) {
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw MalformedResponse(std::string("search response is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedResponse("search response is not a JSON object");

  SearchResponse out;
  if (auto it = j.find("answerBox"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw MalformedResponse("answerBox is not an object");
    DirectAnswer a;
    a.text = string_field(*it, "answer");
    if (a.text.empty()) a.text = string_field(*it, "snippet");
    a.source_url = string_field(*it, "link");
    a.title = string_field(*it, "title");
    if (!a.text.empty()) out.direct_answer = std::move(a);
  }
  if (auto it = j.find("organic"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedResponse("organic is not a list");
    for (const auto& r : *it) {
      if (!r.is_object()) throw MalformedResponse("organic entry is not an object");
      out.organic.push_back({string_field(r, "title"), string_field(r, "link"), string_field(r, "snippet")});
    }
  }
  return out;
}

RecordedSearch::RecordedSearch(std::map<std::string, std::string> bodies, async::Duration latency)
    : bodies_(std::move(bodies)), latency_(latency) {}

std::shared_ptr<RecordedSearch> RecordedSearch::from_directory(const std::filesystem::path& dir,
                                                               async::Duration latency) {
  if (!std::filesystem::is_directory(dir))
    throw FormatError("search fixture directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::map<std::string, std::string> bodies;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    Json j;
    try {
      j = Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
      throw FormatError("fixture " + f.string() + " is not valid JSON: " + e.what());
    }
    auto add = [&](const Json& rec) {
      if (!rec.is_object() || !rec.contains("query") || !rec.contains("response"))
        throw FormatError("fixture " + f.string() + " needs \"query\" and \"response\"");
      bodies[rec.at("query").get<std::string>()] = rec.at("response").dump();
    };
    if (j.is_array())
      for (const auto& rec : j) add(rec);
    else
      add(j);
  }
  return std::make_shared<RecordedSearch>(std::move(bodies), latency);
}

async::Task<SearchResponse> RecordedSearch::fetch(std::string query) {
  const std::string* body = nullptr;
  {
    std::lock_guard lock(mutex_);
    seen_.push_back(query);
  }
  if (auto it = bodies_.find(query); it != bodies_.end())
    body = &it->second;
  else if (auto wild = bodies_.find("*"); wild != bodies_.end())
    body = &wild->second;
  if (!body) throw FixtureNotFound(query);
  co_await async::sleep_for(latency_);
  co_return parse_serper_response(*body);
}

std::vector<std::string> RecordedSearch::queries_seen() const {
  std::lock_guard lock(mutex_);
  return seen_;
}

SerperSearch::SerperSearch(std::string endpoint, std::string credential_ref, double timeout_seconds)
    : endpoint_(std::move(endpoint)), credential_ref_(std::move(credential_ref)), timeout_(timeout_seconds) {}

async::Task<SearchResponse> SerperSearch::fetch(std::string query) {
  const auto key = net::credential(credential_ref_);
  if (key.empty()) throw ProviderError(ProviderErrorKind::auth, "environment variable " + credential_ref_ + " is not set");
  const std::map<std::string, std::string> headers{{"X-API-KEY", key}};
  const auto body = Json{{"q", query}}.dump();
  auto& loop = async::EventLoop::current();
  auto res = co_await loop.run_blocking([&] { return net::post_json(endpoint_, headers, body, timeout_); });
  if (res.status == 401 || res.status == 403)
    throw ProviderError(ProviderErrorKind::auth, "search API rejected credentials", res.status);
  if (res.status == 429 || res.status >= 500)
    throw ProviderError(ProviderErrorKind::http_status, "search API returned HTTP " + std::to_string(res.status),
                        res.status);
  if (res.status < 200 || res.status >= 300)
    throw ProviderError(ProviderErrorKind::bad_request, "search API returned HTTP " + std::to_string(res.status),
                        res.status);
  co_return parse_serper_response(res.body);
}

async::Task<SearchResponse> search(SearchClient& client, SearchQuery query, const llm::RetryPolicy& policy,
                                   llm::CostAccumulator* cost, int* attempts) {
  std::string last_error = "no attempt made";
  const int max_attempts = std::max(policy.max_attempts, 1);
  int wire = 0;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::exception_ptr failure;
    bool reached_wire = true;
    try {
      auto response = co_await client.fetch(query.text);
      if (cost) cost->add_web_query();
      if (attempts) *attempts = ++wire;
      co_return response;
    } catch (const FixtureNotFound&) {
      reached_wire = false;
      failure = std::current_exception();
    } catch (...) {
      failure = std::current_exception();
    }
    if (reached_wire) {
      if (cost) cost->add_web_query();
      ++wire;
    }
    if (attempts) *attempts = wire;
    try {
      std::rethrow_exception(failure);
    } catch (const MalformedResponse&) {
      throw;
    } catch (const std::exception& e) {
      const bool retry = policy.retryable ? policy.retryable(e) : llm::default_retryable(e);
      if (!retry) throw NonRetryable(e.what(), attempt);
      last_error = e.what();
    }
    if (attempt < max_attempts) co_await async::sleep_for(policy.delay_after(attempt));
  }
  throw ExhaustedRetries(max_attempts, last_error);
}

}  // namespace factcheck::retrieval
