#include "factcheck/llm/openai_provider.hpp"

#include <nlohmann/json.hpp>

#include "factcheck/async/event_loop.hpp"
#include "factcheck/core/error.hpp"
#include "factcheck/net/http.hpp"

namespace factcheck::llm {

using Json = nlohmann::json;

OpenAiProvider::OpenAiProvider(ProviderConfig config) : config_(std::move(config)) { config_.validate(); }

std::string OpenAiProvider::request_body(const LlmRequest& request) const {
  Json body{{"model", config_.model},
            {"temperature", 0},
            {"messages", Json::array({Json{{"role", "user"}, {"content", request.prompt}}})}};
  return body.dump(-1, ' ', false, Json::error_handler_t::replace);
}

Completion OpenAiProvider::parse_response(int status, const std::string& body) {
  if (status == 401 || status == 403)
    throw ProviderError(ProviderErrorKind::auth, "provider rejected credentials (HTTP " + std::to_string(status) + ")",
                        status);
  if (status == 429 || status >= 500)
    throw ProviderError(ProviderErrorKind::http_status, "provider returned HTTP " + std::to_string(status), status);
  if (status < 200 || status >= 300)
    throw ProviderError(ProviderErrorKind::bad_request,
                        "provider returned HTTP " + std::to_string(status) + ": " + body.substr(0, 200), status);
  Json j;
  try {
    j = Json::parse(body);
  } catch (const Json::parse_error&) {
    throw ProviderError(ProviderErrorKind::network, "provider response is not JSON", status);
  }
  Completion c;
  try {
    c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception&) {
    throw ProviderError(ProviderErrorKind::network, "provider response lacks choices[0].message.content", status);
  }
  if (auto it = j.find("usage"); it != j.end() && it->is_object() && it->contains("prompt_tokens")) {
    c.usage = Usage{it->value("prompt_tokens", std::uint64_t{0}), it->value("completion_tokens", std::uint64_t{0})};
  }
  return c;
}

async::Task<Completion> OpenAiProvider::complete(LlmRequest request) {
  const auto key = net::credential(config_.credential_ref);
  if (!config_.credential_ref.empty() && key.empty())
    throw ProviderError(ProviderErrorKind::auth, "environment variable " + config_.credential_ref + " is not set");
  std::map<std::string, std::string> headers;
  if (!key.empty()) headers["Authorization"] = "Bearer " + key;
  auto body = request_body(request);
  auto& loop = async::EventLoop::current();
  auto response = co_await loop.run_blocking(
      [&] { return net::post_json(config_.endpoint, headers, body, config_.timeout); });
  co_return parse_response(response.status, response.body);
}

}  // namespace factcheck::llm
