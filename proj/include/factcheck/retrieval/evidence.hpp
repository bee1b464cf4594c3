#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/retrieval/search.hpp"

namespace factcheck::retrieval {

/// Relevance scorer for evidence snippets. Implementations return one score
/// per snippet; callers clamp to [0, 1].
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual std::string name() const = 0;
  virtual std::vector<double> rank(std::string_view claim, const std::vector<std::string>& snippets) const = 0;
};

/// |content(claim) ∩ content(snippet)| / |content(claim)|; all zeros when
/// the claim has no content words.
std::vector<double> lexical_rank(std::string_view claim, const std::vector<std::string>& snippets);

class LexicalRanker final : public Ranker {
 public:
  std::string name() const override { return "lexical"; }
  std::vector<double> rank(std::string_view claim, const std::vector<std::string>& snippets) const override {
    return lexical_rank(claim, snippets);
  }
};

/// Scores everything 0, leaving order to the URL tie-break.
class NullRanker final : public Ranker {
 public:
  std::string name() const override { return "none"; }
  std::vector<double> rank(std::string_view, const std::vector<std::string>& snippets) const override {
    return std::vector<double>(snippets.size(), 0.0);
  }
};

inline constexpr std::size_t kOrganicPerResponse = 5;

/// Turns a claim's search responses into evidence. A response with a direct
/// answer contributes only that answer (relevance 1.0, is_direct_answer);
/// otherwise its first `organic_cap` results with a snippet are kept. Organic
/// results are de-duplicated by URL across responses, scored by `ranker`,
/// and the list is ordered by (direct answer first, relevance descending,
/// URL ascending). Stances are left as `irrelevant` for the verifier.
std::vector<EvidenceItem> extract_evidence(const Claim& claim, const std::vector<SearchResponse>& responses,
                                           const Ranker& ranker, std::size_t organic_cap = kOrganicPerResponse);

/// Sort order used by extract_evidence.
void order_evidence(std::vector<EvidenceItem>& items);

}  // namespace factcheck::retrieval
