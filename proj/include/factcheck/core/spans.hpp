#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"

namespace factcheck {

struct SpanMatchOptions {
  /// Fraction of the claim's content words a window must contain.
  double min_coverage = 0.6;
};

/// Locate where a decomposed claim came from in its source document.
///
/// A verbatim occurrence wins outright. Otherwise the document is cut into
/// clauses (at punctuation and coordinating conjunctions) and every run of
/// consecutive clauses is a candidate window. Among windows covering at least
/// `min_coverage` of the claim's content words, the one with the highest
/// Jaccard similarity to the claim is chosen; ties go to the shorter window,
/// then the earlier one. Offsets are in code points, trimmed to the first and
/// last word of the window. No qualifying window yields an empty list.
std::vector<ClaimSpan> map_claim_to_spans(const Document& document, std::string_view claim,
                                          const SpanMatchOptions& options = {});

std::vector<std::vector<ClaimSpan>> map_claims_to_spans(const Document& document,
                                                        const std::vector<std::string>& claims,
                                                        const SpanMatchOptions& options = {});

}  // namespace factcheck
