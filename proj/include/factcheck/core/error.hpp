#pragma once

#include <stdexcept>
#include <string>

namespace factcheck {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyDocument : public Error {
 public:
  EmptyDocument() : Error("document text is empty") {}
};

class UnsupportedLanguage : public Error {
 public:
  explicit UnsupportedLanguage(const std::string& lang)
      : Error("no prompt templates registered for language '" + lang + "'"), language(lang) {}
  std::string language;
};

class InconsistentInput : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

// Prompt rendering.
class MissingBinding : public Error {
 public:
  explicit MissingBinding(const std::string& placeholder)
      : Error("missing binding for placeholder {" + placeholder + "}"), name(placeholder) {}
  std::string name;
};

// Structured output. ParseFailure is retryable; SchemaViolation is not.
class ParseFailure : public Error {
 public:
  using Error::Error;
};

class SchemaViolation : public Error {
 public:
  using Error::Error;
};

enum class ProviderErrorKind { network, timeout, http_status, auth, bad_request };

class ProviderError : public Error {
 public:
  ProviderError(ProviderErrorKind k, const std::string& what, int status = 0)
      : Error(what), kind(k), http_status(status) {}
  ProviderErrorKind kind;
  int http_status;
};

class ExhaustedRetries : public Error {
 public:
  ExhaustedRetries(int n, const std::string& last)
      : Error("gave up after " + std::to_string(n) + " attempts: " + last),
        attempts(n),
        last_error(last) {}
  int attempts;
  std::string last_error;
};

class NonRetryable : public Error {
 public:
  explicit NonRetryable(const std::string& cause, int n = 1)
      : Error("non-retryable error: " + cause), attempts(n) {}
  int attempts;
};

class MalformedResponse : public Error {
 public:
  using Error::Error;
};

class FixtureNotFound : public Error {
 public:
  explicit FixtureNotFound(const std::string& query)
      : Error("no recorded search response for query '" + query + "'") {}
};

}  // namespace factcheck
