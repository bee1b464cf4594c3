#include "factcheck/retrieval/evidence.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "factcheck/core/error.hpp"
#include "factcheck/core/text.hpp"

namespace factcheck::retrieval {

std::vector<double> lexical_rank(std::string_view claim, const std::vector<std::string>& snippets) {
  const auto claim_words = text::content_words(claim);
  std::vector<double> out;
  out.reserve(snippets.size());
  for (const auto& s : snippets) {
    if (claim_words.empty()) {
      out.push_back(0.0);
      continue;
    }
    const auto words = text::content_words(s);
    std::size_t shared = 0;
    for (const auto& w : claim_words) shared += words.contains(w) ? 1 : 0;
    out.push_back(std::clamp(static_cast<double>(shared) / static_cast<double>(claim_words.size()), 0.0, 1.0));
  }
  return out;
}

void order_evidence(std::vector<EvidenceItem>& items) {
  std::stable_sort(items.begin(), items.end(), [](const EvidenceItem& a, const EvidenceItem& b) {
    if (a.is_direct_answer != b.is_direct_answer) return a.is_direct_answer;
    if (a.relevance != b.relevance) return a.relevance > b.relevance;
    return a.url < b.url;
  });
}

std::vector<EvidenceItem> extract_evidence(const Claim& claim, const std::vector<SearchResponse>& responses,
                                           const Ranker& ranker, std::size_t organic_cap) {
  std::vector<EvidenceItem> direct;
  std::vector<EvidenceItem> organic;
  std::set<std::pair<std::string, std::string>> seen_answers;
  std::set<std::string> seen_urls;

  for (const auto& r : responses) {
    if (r.direct_answer) {
      const auto& a = *r.direct_answer;
      if (seen_answers.emplace(a.source_url, a.text).second) {
        EvidenceItem e;
        e.claim_id = claim.id;
        e.url = a.source_url;
        e.source_title = a.title;
        e.snippet = a.text;
        e.relevance = 1.0;
        e.is_direct_answer = true;
        direct.push_back(std::move(e));
      }
      continue;
    }
    std::size_t taken = 0;
    for (const auto& o : r.organic) {
      if (taken == organic_cap) break;
      ++taken;
      if (o.snippet.empty()) continue;
      if (!seen_urls.insert(o.url).second) continue;
      EvidenceItem e;
      e.claim_id = claim.id;
      e.url = o.url;
      e.source_title = o.title;
      e.snippet = o.snippet;
      organic.push_back(std::move(e));
    }
  }

  if (!organic.empty()) {
    std::vector<std::string> snippets;
    snippets.reserve(organic.size());
    for (const auto& e : organic) snippets.push_back(e.snippet);
    const auto scores = ranker.rank(claim.text, snippets);
    if (scores.size() != snippets.size())
      throw InconsistentInput("ranker '" + ranker.name() + "' returned " + std::to_string(scores.size()) +
                              " scores for " + std::to_string(snippets.size()) + " snippets");
    for (std::size_t i = 0; i < organic.size(); ++i) {
      const double s = scores[i];
      organic[i].relevance = s != s ? 0.0 : std::clamp(s, 0.0, 1.0);
    }
  }

  std::vector<EvidenceItem> out = std::move(direct);
  out.insert(out.end(), std::make_move_iterator(organic.begin()), std::make_move_iterator(organic.end()));
  order_evidence(out);
  return out;
}

}  // namespace factcheck::retrieval
