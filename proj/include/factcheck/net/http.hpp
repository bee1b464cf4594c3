#pragma once

#include <map>
#include <string>

namespace factcheck::net {

struct Url {
  std::string scheme_host_port;  // "https://api.example.com:443"
  std::string path;              // "/v1/chat/completions"
};

/// Splits an absolute http(s) URL. Throws std::invalid_argument otherwise.
Url split_url(const std::string& url);

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Blocking JSON POST. Transport failures throw ProviderError (network or
/// timeout); any HTTP status is returned to the caller.
HttpResponse post_json(const std::string& url, const std::map<std::string, std::string>& headers,
                       const std::string& body, double timeout_seconds);

/// Reads the environment variable `name`; empty if unset.
std::string credential(const std::string& name);

}  // namespace factcheck::net
