#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/llm/template.hpp"

namespace factcheck::llm {

struct ClaimList {
  std::vector<std::string> claims;
};

struct CheckworthinessJudgement {
  std::string claim;
  bool worthy = false;
  std::string reason;
};

struct CheckworthinessList {
  std::vector<CheckworthinessJudgement> results;
};

struct QueryList {
  std::vector<std::string> queries;
};

struct StanceJudgement {
  std::optional<std::size_t> evidence;  // 1-based number as written in the prompt
  Stance stance = Stance::irrelevant;
  std::string reasoning;
};

struct Verification {
  double factuality = 0.0;
  std::vector<StanceJudgement> stances;
  std::string reasoning;
};

using StructuredOutput = std::variant<ClaimList, CheckworthinessList, QueryList, Verification>;

/// First balanced `{...}` in `raw` that parses as JSON. Prose around it and
/// markdown code fences are skipped. Returns nullopt if there is none.
std::optional<std::string> extract_json_object(std::string_view raw);

// Each parser throws ParseFailure when no JSON object can be found or a
// required key is absent, and SchemaViolation when a value has the wrong type
// or range. Nothing else escapes.
ClaimList parse_claim_list(std::string_view raw);
CheckworthinessList parse_checkworthiness(std::string_view raw);
QueryList parse_query_list(std::string_view raw);
Verification parse_verification(std::string_view raw);

StructuredOutput parse_structured_output(std::string_view raw, LlmTask task);

}  // namespace factcheck::llm
