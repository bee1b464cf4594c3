#pragma once

#include <string>
#include <vector>

#include "factcheck/core/types.hpp"

namespace factcheck::scoring {

/// Builds the four-level report.
///
///   Level 1  credibility_percent, counts
///   Level 2  claims (document order, with spans and unworthy reasons)
///   Level 3  verdicts[id].evidence_summary and evidence list per claim
///   Level 4  each evidence item's url, snippet, stance, reasoning
///
/// Claims are ordered by the start of their first span; claims without spans
/// follow in their original order. Throws InconsistentInput when a worthy
/// claim has no verdict, a verdict names a claim that is not worthy, a span
/// falls outside the document, or a verdict breaks the label/evidence rules.
FactReport assemble_report(const Document& document, std::vector<Claim> claims,
                           const std::vector<ClaimVerdict>& verdicts, const CostRecord& cost,
                           std::vector<std::string> warnings = {}, std::string created_at = {});

/// Every rule assemble_report enforces, checked on an existing report.
/// Returns a description of each violation (empty when consistent).
std::vector<std::string> check_report(const FactReport& report);

}  // namespace factcheck::scoring
