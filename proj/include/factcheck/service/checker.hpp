#pragma once

#include <memory>
#include <optional>
#include <string>

#include "factcheck/pipeline/pipeline.hpp"
#include "factcheck/service/config.hpp"

namespace factcheck::service {

struct CheckOptions {
  std::optional<std::string> language;  // defaults to the configured language
};

/// Library entry point: owns the gateway, search client and pipeline built
/// from an ApiConfig. Safe to call from several threads at once; each call
/// drives its own event loop while the rate limiter is shared.
class FactChecker {
 public:
  explicit FactChecker(ApiConfig config);
  FactChecker(std::shared_ptr<pipeline::Pipeline> pipeline, std::string default_language = "en");

  /// Throws EmptyDocument, UnsupportedLanguage, or whatever decomposition
  /// failed with.
  FactReport check_response(const std::string& text, const CheckOptions& options = {});
  pipeline::PipelineResult check_document(const Document& document);

  /// Throws EmptyDocument / UnsupportedLanguage without running anything.
  Document make_document(const std::string& text, const CheckOptions& options = {}) const;

  pipeline::Pipeline& pipeline() { return *pipeline_; }
  const std::string& default_language() const { return language_; }

 private:
  std::shared_ptr<pipeline::Pipeline> pipeline_;
  std::string language_;
};

/// The search client `config.search` describes.
std::shared_ptr<retrieval::SearchClient> make_search_client(const SearchConfig& config);

/// Pipeline for the config's default provider.
std::shared_ptr<pipeline::Pipeline> make_pipeline(const ApiConfig& config);

}  // namespace factcheck::service
