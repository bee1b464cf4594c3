#include "factcheck/service/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "factcheck/core/error.hpp"

namespace factcheck::service {

namespace {

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (auto v = node[key]; v && !v.IsNull()) {
    try {
      out = v.as<T>();
    } catch (const YAML::Exception& e) {
      throw FormatError(std::string("config key '") + key + "': " + e.what());
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

}  // namespace

const llm::ProviderConfig& ApiConfig::provider(const std::string& name) const {
  for (const auto& p : providers)
    if (p.name == name) return p;
  throw FormatError("no provider named '" + name + "' in the config");
}

void ApiConfig::validate() const {
  if (providers.empty()) throw FormatError("config lists no providers");
  std::set<std::string> names;
  for (const auto& p : providers) {
    if (p.name.empty()) throw FormatError("every provider needs a name");
    if (!names.insert(p.name).second) throw FormatError("duplicate provider name '" + p.name + "'");
    if (p.kind != "mock" && p.kind != "openai")
      throw FormatError("provider '" + p.name + "' has unknown kind '" + p.kind + "'");
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw FormatError("provider '" + p.name + "': " + e.what());
    }
  }
  if (!names.contains(default_provider))
    throw FormatError("default_provider '" + default_provider + "' is not a listed provider");
  if (search.mode != "recorded" && search.mode != "live")
    throw FormatError("search mode must be 'recorded' or 'live', not '" + search.mode + "'");
  if (service.workers < 1) throw FormatError("service.workers must be at least 1");
  if (service.port < 0 || service.port > 65535) throw FormatError("service.port out of range");
  try {
    label_rule.validate();
    retry.validate();
    pipeline::PipelineConfig pc;
    pc.queries_per_claim = queries_per_claim;
    pc.results_per_query = results_per_query;
    pc.ranker = ranker == pipeline::RankerKind::nli_plugin ? pipeline::RankerKind::lexical : ranker;
    pc.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  if (ranker == pipeline::RankerKind::nli_plugin)
    throw FormatError("ranker 'nli_plugin' needs a plugin supplied in code; use 'lexical' or 'none' in YAML");
}

ApiConfig parse_api_config(const std::string& yaml, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw FormatError(std::string("invalid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw FormatError("config must be a YAML mapping");

  ApiConfig c;
  if (auto ps = root["providers"]) {
    if (!ps.IsSequence()) throw FormatError("'providers' must be a list");
    for (const auto& n : ps) {
      llm::ProviderConfig p;
      read(n, "name", p.name);
      read(n, "kind", p.kind);
      read(n, "endpoint", p.endpoint);
      read(n, "model", p.model);
      read(n, "credential_ref", p.credential_ref);
      read(n, "max_requests", p.max_requests);
      read(n, "window", p.window);
      read(n, "timeout", p.timeout);
      read(n, "transcript", p.transcript);
      if (!p.transcript.empty()) p.transcript = resolve(p.transcript, base_dir).string();
      c.providers.push_back(std::move(p));
    }
  }
  read(root, "default_provider", c.default_provider);
  if (c.default_provider.empty() && !c.providers.empty()) c.default_provider = c.providers.front().name;
  read(root, "language", c.language);

  if (auto s = root["search"]) {
    read(s, "mode", c.search.mode);
    read(s, "endpoint", c.search.endpoint);
    read(s, "credential_ref", c.search.credential_ref);
    std::string fixtures;
    read(s, "fixtures_path", fixtures);
    c.search.fixtures_path = resolve(fixtures, base_dir);
    double latency_ms = 0;
    read(s, "latency_ms", latency_ms);
    c.search.latency = latency_ms / 1000.0;
    read(s, "timeout", c.search.timeout);
  }
  if (auto l = root["label_rule"]) {
    read(l, "support_threshold", c.label_rule.support_threshold);
    read(l, "refute_threshold", c.label_rule.refute_threshold);
  }
  if (auto r = root["retry"]) {
    read(r, "max_attempts", c.retry.max_attempts);
    read(r, "base_delay", c.retry.base_delay);
    read(r, "backoff_factor", c.retry.backoff_factor);
  }
  if (auto p = root["pipeline"]) {
    read(p, "queries_per_claim", c.queries_per_claim);
    read(p, "results_per_query", c.results_per_query);
    std::string ranker;
    read(p, "ranker", ranker);
    if (!ranker.empty()) {
      try {
        c.ranker = pipeline::parse_ranker_kind(ranker);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
      }
    }
  }
  if (auto s = root["service"]) {
    read(s, "host", c.service.host);
    read(s, "port", c.service.port);
    read(s, "queue_depth", c.service.queue_depth);
    read(s, "workers", c.service.workers);
    std::string store;
    read(s, "store_path", store);
    if (!store.empty()) c.service.store_path = resolve(store, base_dir);
  }
  c.validate();
  return c;
}

ApiConfig load_api_config(const std::filesystem::path& path) {
  std::string text;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_api_config(text, path.parent_path());
}

void select_backend(ApiConfig& config, bool live) {
  for (const auto& p : config.providers) {
    if ((p.kind == "mock") != live) {
      config.default_provider = p.name;
      config.search.mode = live ? "live" : "recorded";
      return;
    }
  }
  throw FormatError(std::string("config has no ") + (live ? "live" : "mock") + " provider");
}

}  // namespace factcheck::service
