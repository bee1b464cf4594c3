#pragma once

// Canonical JSON encoding of the domain types. Keys are snake_case and
// objects are emitted with sorted keys, so equal reports serialize to equal
// bytes. The layout is documented in docs/report-format.md.

#include <string>

#include <nlohmann/json.hpp>

#include "factcheck/core/types.hpp"

namespace factcheck {

using Json = nlohmann::json;

void to_json(Json& j, const Document& d);
void from_json(const Json& j, Document& d);
void to_json(Json& j, const ClaimSpan& s);
void from_json(const Json& j, ClaimSpan& s);
void to_json(Json& j, const Claim& c);
void from_json(const Json& j, Claim& c);
void to_json(Json& j, const SearchQuery& q);
void from_json(const Json& j, SearchQuery& q);
void to_json(Json& j, const EvidenceItem& e);
void from_json(const Json& j, EvidenceItem& e);
void to_json(Json& j, const ClaimVerdict& v);
void from_json(const Json& j, ClaimVerdict& v);
void to_json(Json& j, const LabelCounts& c);
void from_json(const Json& j, LabelCounts& c);
void to_json(Json& j, const CostRecord& c);
void from_json(const Json& j, CostRecord& c);
void to_json(Json& j, const FactReport& r);
void from_json(const Json& j, FactReport& r);

inline constexpr int kReportSchemaVersion = 1;

std::string to_canonical_json(const FactReport& report);
std::string dump_canonical(const Json& j);
FactReport report_from_json(const std::string& text);

/// Copy of a serialized report with run-dependent fields (created_at,
/// cost.wall_time) replaced by fixed placeholders.
Json mask_volatile(Json report);

}  // namespace factcheck
