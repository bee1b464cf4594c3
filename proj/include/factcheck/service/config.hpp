#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "factcheck/llm/provider.hpp"
#include "factcheck/llm/retry.hpp"
#include "factcheck/pipeline/pipeline.hpp"
#include "factcheck/scoring/labels.hpp"

namespace factcheck::service {

struct SearchConfig {
  std::string mode = "recorded";  // recorded | live
  std::string endpoint = "https://google.serper.dev/search";
  std::string credential_ref = "SERPER_API_KEY";
  std::filesystem::path fixtures_path;  // recorded mode
  double latency = 0.0;                 // seconds, recorded mode
  double timeout = 30.0;                // seconds, live mode
};

struct ServiceSettings {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t queue_depth = 16;
  std::size_t workers = 4;
  std::filesystem::path store_path = "checks.jsonl";
};

/// Everything needed to build a checker and a service. Relative paths in the
/// YAML file are resolved against the file's directory.
struct ApiConfig {
  std::vector<llm::ProviderConfig> providers;
  std::string default_provider;
  std::string language = "en";
  SearchConfig search;
  scoring::LabelRule label_rule;
  llm::RetryPolicy retry;
  int queries_per_claim = 3;
  int results_per_query = 5;
  pipeline::RankerKind ranker = pipeline::RankerKind::lexical;
  ServiceSettings service;

  const llm::ProviderConfig& provider(const std::string& name) const;
  const llm::ProviderConfig& default_provider_config() const { return provider(default_provider); }

  /// Throws FormatError on an unknown default provider, duplicate provider
  /// names, an unknown search mode, or out-of-range settings.
  void validate() const;
};

ApiConfig load_api_config(const std::filesystem::path& path);
ApiConfig parse_api_config(const std::string& yaml, const std::filesystem::path& base_dir = {});

/// Switches the config to an offline or a live backend: the default provider
/// becomes the first provider of the matching kind and the search mode
/// follows. Throws FormatError when no such provider is configured.
void select_backend(ApiConfig& config, bool live);

}  // namespace factcheck::service
