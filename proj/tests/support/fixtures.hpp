#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/llm/gateway.hpp"
#include "factcheck/llm/mock_provider.hpp"
#include "factcheck/pipeline/pipeline.hpp"
#include "factcheck/retrieval/search.hpp"

namespace fctest {

inline std::filesystem::path data_dir() { return FACTCHECK_TEST_DATA; }
inline std::filesystem::path demo_dir() { return FACTCHECK_DEMO_DATA; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::string kMary =
    "Mary is a five-year old girl, she likes playing piano and she doesn't like cookies.";

inline factcheck::llm::RetryPolicy fast_retry(int attempts = 3) {
  factcheck::llm::RetryPolicy p;
  p.max_attempts = attempts;
  p.base_delay = 0.0;
  return p;
}

inline std::shared_ptr<factcheck::llm::RateLimiter> open_limiter() {
  return std::make_shared<factcheck::llm::RateLimiter>(1'000'000, factcheck::async::seconds(60));
}

struct MaryRig {
  std::shared_ptr<factcheck::llm::MockProvider> provider;
  std::shared_ptr<factcheck::retrieval::RecordedSearch> search;
  std::shared_ptr<factcheck::pipeline::Pipeline> pipeline;
};

/// Pipeline wired to the recorded Mary transcript and search fixtures.
inline MaryRig mary_rig(factcheck::pipeline::PipelineConfig config = {}) {
  using namespace factcheck;
  MaryRig rig;
  rig.provider = std::make_shared<llm::MockProvider>(llm::Transcript::load(data_dir() / "mary" / "transcript.json"));
  rig.search = retrieval::RecordedSearch::from_directory(data_dir() / "mary" / "search");
  auto gateway = std::make_shared<llm::Gateway>(rig.provider, open_limiter(), fast_retry());
  rig.pipeline = std::make_shared<pipeline::Pipeline>(gateway, rig.search, fast_retry(), config);
  return rig;
}


/// Document of `n` sentences "Fact k holds for item k." whose decomposition
/// is exactly those sentences.
inline std::vector<std::string> synthetic_claims(int n) {
  std::vector<std::string> out;
  for (int k = 1; k <= n; ++k) out.push_back("Fact " + std::to_string(k) + " holds for item " + std::to_string(k) + ".");
  return out;
}

inline std::string synthetic_document(int n) {
  std::string doc;
  for (const auto& c : synthetic_claims(n)) doc += (doc.empty() ? "" : " ") + c;
  return doc;
}

/// Text bound to the last "<label>: ...\n" line of a prompt.
inline std::string last_field(const std::string& prompt, const std::string& label) {
  const auto at = prompt.rfind("\n" + label + ": ");
  if (at == std::string::npos) return {};
  const auto begin = at + label.size() + 3;
  return prompt.substr(begin, prompt.find('\n', begin) - begin);
}

/// Task-aware scripted model for synthetic documents: every claim worthy,
/// three queries per claim, verification at `factuality` with all evidence
/// supporting.
inline factcheck::llm::MockProvider::Responder synthetic_responder(int n, double factuality = 0.9) {
  using factcheck::llm::LlmTask;
  return [n, factuality](const factcheck::llm::LlmRequest& req) {
    nlohmann::json out;
    switch (req.task) {
      case LlmTask::decompose:
        out = {{"claims", synthetic_claims(n)}};
        break;
      case LlmTask::checkworthiness: {
        out["results"] = nlohmann::json::array();
        for (const auto& c : synthetic_claims(n))
          out["results"].push_back({{"claim", c}, {"worthy", true}, {"reason", "verifiable"}});
        break;
      }
      case LlmTask::query_gen: {
        const auto claim = last_field(req.prompt, "Claim");
        out = {{"queries", {claim + " source", claim + " record", claim + " report"}}};
        break;
      }
      case LlmTask::verify:
        out = {{"factuality", factuality},
               {"stances", std::vector<std::string>(10, "supports")},
               {"reasoning", "consistent"}};
        break;
    }
    return factcheck::llm::Completion{out.dump(), factcheck::llm::Usage{100, 20}};
  };
}

/// Wildcard search fixture: two organic results for any query.
inline std::shared_ptr<factcheck::retrieval::RecordedSearch> synthetic_search(factcheck::async::Duration latency) {
  const std::string body =
      R"({"organic": [{"title": "Registry", "link": "https://example.org/registry", "snippet": "The registry confirms the fact holds for the item."},
                      {"title": "Archive", "link": "https://example.org/archive", "snippet": "Archive records show the fact."}]})";
  return std::make_shared<factcheck::retrieval::RecordedSearch>(std::map<std::string, std::string>{{"*", body}}, latency);
}

}  // namespace fctest
