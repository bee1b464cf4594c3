#include "factcheck/net/http.hpp"

#include <cstdlib>
#include <stdexcept>

#include <httplib.h>

#include "factcheck/core/error.hpp"

namespace factcheck::net {

Url split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("not an absolute URL: " + url);
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw std::invalid_argument("unsupported URL scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  Url out;
  if (path_begin == std::string::npos) {
    out.scheme_host_port = url;
    out.path = "/";
  } else {
    out.scheme_host_port = url.substr(0, path_begin);
    out.path = url.substr(path_begin);
  }
  return out;
}

HttpResponse post_json(const std::string& url, const std::map<std::string, std::string>& headers,
                       const std::string& body, double timeout_seconds) {
  const auto parts = split_url(url);
  httplib::Client client(parts.scheme_host_port);
  const auto secs = static_cast<time_t>(timeout_seconds);
  const auto usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(parts.path, h, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto kind = err == httplib::Error::Read || err == httplib::Error::Write ||
                              err == httplib::Error::ConnectionTimeout
                          ? ProviderErrorKind::timeout
                          : ProviderErrorKind::network;
    throw ProviderError(kind, "HTTP request to " + parts.scheme_host_port + " failed: " + httplib::to_string(err));
  }
  return HttpResponse{res->status, res->body};
}

std::string credential(const std::string& name) {
  if (name.empty()) return {};
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

}  // namespace factcheck::net
