#include "factcheck/llm/gateway.hpp"

#include <stdexcept>

#include "factcheck/llm/mock_provider.hpp"
#include "factcheck/llm/openai_provider.hpp"

namespace factcheck::llm {

Gateway::Gateway(std::shared_ptr<LlmProvider> provider, std::shared_ptr<RateLimiter> limiter, RetryPolicy policy,
                 std::shared_ptr<const TemplateRegistry> templates)
    : provider_(std::move(provider)),
      limiter_(std::move(limiter)),
      policy_(std::move(policy)),
      templates_(std::move(templates)) {
  if (!provider_ || !limiter_ || !templates_) throw std::invalid_argument("gateway needs a provider, limiter and templates");
  policy_.validate();
}

async::Task<CallResult> Gateway::ask(LlmTask task, std::string language, Bindings bindings, CostAccumulator& cost,
                                     Validator validate) {
  LlmRequest request;
  request.task = task;
  request.language = language;
  request.prompt = render_prompt(templates_->get(task, language), bindings);
  co_return co_await call_with_retry(*provider_, std::move(request), policy_, *limiter_, &cost, std::move(validate));
}

std::shared_ptr<LlmProvider> make_provider(const ProviderConfig& config, const std::filesystem::path& base_dir) {
  config.validate();
  if (config.kind == "mock") {
    std::filesystem::path p = config.transcript;
    if (p.empty()) throw std::invalid_argument("mock provider '" + config.name + "' needs a transcript");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return std::make_shared<MockProvider>(Transcript::load(p), config.name);
  }
  if (config.kind == "openai") return std::make_shared<OpenAiProvider>(config);
  throw std::invalid_argument("unknown provider kind '" + config.kind + "'");
}

}  // namespace factcheck::llm
