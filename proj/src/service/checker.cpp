#include "factcheck/service/checker.hpp"

#include "factcheck/core/error.hpp"
#include "factcheck/core/text.hpp"
#include "factcheck/llm/gateway.hpp"

namespace factcheck::service {

std::shared_ptr<retrieval::SearchClient> make_search_client(const SearchConfig& config) {
  if (config.mode == "live") return std::make_shared<retrieval::SerperSearch>(config.endpoint, config.credential_ref, config.timeout);
  if (config.fixtures_path.empty()) throw FormatError("recorded search needs search.fixtures_path");
  return retrieval::RecordedSearch::from_directory(config.fixtures_path, async::seconds(config.latency));
}

std::shared_ptr<pipeline::Pipeline> make_pipeline(const ApiConfig& config) {
  const auto& pc = config.default_provider_config();
  auto provider = llm::make_provider(pc);
  auto limiter = std::make_shared<llm::RateLimiter>(pc);
  auto gateway = std::make_shared<llm::Gateway>(std::move(provider), std::move(limiter), config.retry);
  pipeline::PipelineConfig opts;
  opts.language = config.language;
  opts.queries_per_claim = config.queries_per_claim;
  opts.results_per_query = config.results_per_query;
  opts.label_rule = config.label_rule;
  opts.ranker = config.ranker;
  return std::make_shared<pipeline::Pipeline>(std::move(gateway), make_search_client(config.search), config.retry,
                                              std::move(opts));
}

FactChecker::FactChecker(ApiConfig config) : FactChecker(make_pipeline(config), config.language) {}

FactChecker::FactChecker(std::shared_ptr<pipeline::Pipeline> pipeline, std::string default_language)
    : pipeline_(std::move(pipeline)), language_(std::move(default_language)) {
  if (!pipeline_) throw std::invalid_argument("FactChecker needs a pipeline");
}

Document FactChecker::make_document(const std::string& text, const CheckOptions& options) const {
  Document d;
  d.text = text;
  d.language = options.language.value_or(language_);
  d.id = document_id_for(text);
  if (text::trim(text).empty()) throw EmptyDocument();
  if (!pipeline_->gateway().templates().supports(d.language)) throw UnsupportedLanguage(d.language);
  return d;
}

pipeline::PipelineResult FactChecker::check_document(const Document& document) {
  return pipeline::run_pipeline(*pipeline_, document);
}

FactReport FactChecker::check_response(const std::string& text, const CheckOptions& options) {
  return check_document(make_document(text, options)).report;
}

}  // namespace factcheck::service
