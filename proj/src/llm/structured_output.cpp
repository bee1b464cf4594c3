#include "factcheck/llm/structured_output.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "factcheck/core/error.hpp"

namespace factcheck::llm {

using Json = nlohmann::json;

namespace {

// End index (exclusive) of the balanced object starting at raw[begin], or 0.
std::size_t balanced_end(std::string_view raw, std::size_t begin) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = begin; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return 0;
}

Json object_from(std::string_view raw) {
  auto text = extract_json_object(raw);
  if (!text) throw ParseFailure("no JSON object found in completion");
  return Json::parse(*text);
}

const Json& key(const Json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) throw ParseFailure(std::string("missing key \"") + name + "\"");
  return *it;
}

std::vector<std::string> string_list(const Json& v, const char* name) {
  if (!v.is_array()) throw SchemaViolation(std::string("\"") + name + "\" must be a list");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw SchemaViolation(std::string("\"") + name + "\" must contain strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::string optional_string(const Json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw SchemaViolation(std::string("\"") + name + "\" must be a string");
  return it->get<std::string>();
}

Stance stance_from(const Json& v) {
  if (!v.is_string()) throw SchemaViolation("stance must be a string");
  try {
    return parse_stance(v.get<std::string>());
  } catch (const FormatError& e) {
    throw SchemaViolation(e.what());
  }
}

}  // namespace

std::optional<std::string> extract_json_object(std::string_view raw) {
  for (std::size_t pos = raw.find('{'); pos != std::string_view::npos; pos = raw.find('{', pos + 1)) {
    const auto end = balanced_end(raw, pos);
    if (end == 0) continue;
    auto candidate = raw.substr(pos, end - pos);
    if (Json::accept(candidate)) return std::string(candidate);
  }
  return std::nullopt;
}

ClaimList parse_claim_list(std::string_view raw) {
  const auto obj = object_from(raw);
  return ClaimList{string_list(key(obj, "claims"), "claims")};
}

CheckworthinessList parse_checkworthiness(std::string_view raw) {
  const auto obj = object_from(raw);
  const auto& list = key(obj, "results");
  if (!list.is_array()) throw SchemaViolation("\"results\" must be a list");
  CheckworthinessList out;
  for (const auto& item : list) {
    if (!item.is_object()) throw SchemaViolation("\"results\" entries must be objects");
    CheckworthinessJudgement j;
    const auto& claim = key(item, "claim");
    if (!claim.is_string()) throw SchemaViolation("\"claim\" must be a string");
    j.claim = claim.get<std::string>();
    const auto& worthy = key(item, "worthy");
    if (!worthy.is_boolean()) throw SchemaViolation("\"worthy\" must be a boolean");
    j.worthy = worthy.get<bool>();
    j.reason = optional_string(item, "reason");
    out.results.push_back(std::move(j));
  }
  return out;
}

QueryList parse_query_list(std::string_view raw) {
  const auto obj = object_from(raw);
  return QueryList{string_list(key(obj, "queries"), "queries")};
}

Verification parse_verification(std::string_view raw) {
  const auto obj = object_from(raw);
  Verification out;
  const auto& f = key(obj, "factuality");
  if (!f.is_number()) throw SchemaViolation("\"factuality\" must be a number");
  out.factuality = f.get<double>();
  if (!std::isfinite(out.factuality) || out.factuality < 0.0 || out.factuality > 1.0)
    throw SchemaViolation("\"factuality\" must lie in [0, 1]");
  const auto& stances = key(obj, "stances");
  if (!stances.is_array()) throw SchemaViolation("\"stances\" must be a list");
  for (const auto& s : stances) {
    StanceJudgement j;
    if (s.is_string()) {
      j.stance = stance_from(s);
    } else if (s.is_object()) {
      j.stance = stance_from(key(s, "stance"));
      j.reasoning = optional_string(s, "reasoning");
      if (auto it = s.find("evidence"); it != s.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<long long>() < 1)
          throw SchemaViolation("\"evidence\" must be a positive integer");
        j.evidence = it->get<std::size_t>();
      }
    } else {
      throw SchemaViolation("\"stances\" entries must be strings or objects");
    }
    out.stances.push_back(std::move(j));
  }
  out.reasoning = optional_string(obj, "reasoning");
  return out;
}

StructuredOutput parse_structured_output(std::string_view raw, LlmTask task) {
  try {
    switch (task) {
      case LlmTask::decompose: return parse_claim_list(raw);
      case LlmTask::checkworthiness: return parse_checkworthiness(raw);
      case LlmTask::query_gen: return parse_query_list(raw);
      case LlmTask::verify: return parse_verification(raw);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseFailure(e.what());
  }
  throw ParseFailure("unknown task");
}

}  // namespace factcheck::llm
