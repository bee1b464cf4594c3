#include "factcheck/core/types.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "factcheck/core/error.hpp"

namespace factcheck {

std::string_view to_string(Checkworthiness c) {
  switch (c) {
    case Checkworthiness::worthy: return "worthy";
    case Checkworthiness::unworthy: return "unworthy";
    case Checkworthiness::undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(Stance s) {
  switch (s) {
    case Stance::supports: return "supports";
    case Stance::refutes: return "refutes";
    case Stance::irrelevant: return "irrelevant";
  }
  return "irrelevant";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::well_supported: return "well_supported";
    case Label::refuted: return "refuted";
    case Label::controversial: return "controversial";
    case Label::conflicting: return "conflicting";
    case Label::unverifiable: return "unverifiable";
  }
  return "unverifiable";
}

Checkworthiness parse_checkworthiness(std::string_view s) {
  if (s == "worthy") return Checkworthiness::worthy;
  if (s == "unworthy") return Checkworthiness::unworthy;
  if (s == "undetermined") return Checkworthiness::undetermined;
  throw FormatError("unknown checkworthiness value '" + std::string(s) + "'");
}

Stance parse_stance(std::string_view s) {
  if (s == "supports" || s == "support") return Stance::supports;
  if (s == "refutes" || s == "refute") return Stance::refutes;
  if (s == "irrelevant") return Stance::irrelevant;
  throw FormatError("unknown stance '" + std::string(s) + "'");
}

Label parse_label(std::string_view s) {
  for (auto l : kAllLabels)
    if (to_string(l) == s) return l;
  throw FormatError("unknown label '" + std::string(s) + "'");
}

std::string document_id_for(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "doc-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_timestamp_now() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace factcheck
