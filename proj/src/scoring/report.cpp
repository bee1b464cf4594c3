#include "factcheck/scoring/report.hpp"

#include <algorithm>
#include <set>

#include "factcheck/core/error.hpp"
#include "factcheck/core/text.hpp"
#include "factcheck/scoring/labels.hpp"

namespace factcheck::scoring {

namespace {

bool has_stance(const ClaimVerdict& v, Stance s) {
  return std::any_of(v.evidence.begin(), v.evidence.end(), [s](const EvidenceItem& e) { return e.stance == s; });
}

void order_claims(std::vector<Claim>& claims) {
  std::stable_sort(claims.begin(), claims.end(), [](const Claim& a, const Claim& b) {
    if (a.spans.empty() || b.spans.empty()) return !a.spans.empty() && b.spans.empty();
    return a.spans.front().start < b.spans.front().start;
  });
}

}  // namespace

std::vector<std::string> check_report(const FactReport& r) {
  std::vector<std::string> problems;
  const auto doc_len = text::utf8_length(r.document.text);
  std::set<std::string> worthy;
  for (const auto& c : r.claims) {
    for (const auto& s : c.spans)
      if (!(s.start < s.end && s.end <= doc_len))
        problems.push_back("claim " + c.id + " has span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                           ") outside the document");
    if (c.checkworthy == Checkworthiness::worthy) {
      worthy.insert(c.id);
      if (!r.verdicts.contains(c.id)) problems.push_back("worthy claim " + c.id + " has no verdict");
    }
  }
  for (const auto& [id, v] : r.verdicts) {
    if (!worthy.contains(id)) problems.push_back("verdict for " + id + " does not belong to a worthy claim");
    if (id != v.claim_id) problems.push_back("verdict key " + id + " names claim " + v.claim_id);
    if (!(v.factuality >= 0.0 && v.factuality <= 1.0)) problems.push_back("verdict " + id + " factuality out of range");
    if (v.label == Label::conflicting && !(has_stance(v, Stance::supports) && has_stance(v, Stance::refutes)))
      problems.push_back("verdict " + id + " is conflicting without both supporting and refuting evidence");
    if (v.label == Label::unverifiable && !v.evidence.empty())
      problems.push_back("verdict " + id + " is unverifiable but has evidence");
    for (const auto& e : v.evidence) {
      if (e.snippet.empty()) problems.push_back("verdict " + id + " has evidence with an empty snippet");
      if (!(e.relevance >= 0.0 && e.relevance <= 1.0)) problems.push_back("verdict " + id + " relevance out of range");
    }
  }
  if (r.counts.total() != r.verdicts.size()) problems.push_back("label counts do not sum to the number of verdicts");
  if (r.credibility_percent.has_value() == r.verdicts.empty())
    problems.push_back("credibility_percent must be present exactly when there are verdicts");
  if (r.credibility_percent && !(*r.credibility_percent >= 0.0 && *r.credibility_percent <= 100.0))
    problems.push_back("credibility_percent out of range");
  return problems;
}

FactReport assemble_report(const Document& document, std::vector<Claim> claims,
                           const std::vector<ClaimVerdict>& verdicts, const CostRecord& cost,
                           std::vector<std::string> warnings, std::string created_at) {
  order_claims(claims);

  FactReport r;
  r.document = document;
  r.claims = std::move(claims);
  for (const auto& v : verdicts) {
    if (!r.verdicts.emplace(v.claim_id, v).second)
      throw InconsistentInput("more than one verdict for claim " + v.claim_id);
  }
  const auto agg = aggregate(verdicts);
  r.credibility_percent = agg.credibility_percent;
  r.counts = agg.counts;
  r.cost = cost;
  r.warnings = std::move(warnings);
  r.created_at = created_at.empty() ? utc_timestamp_now() : std::move(created_at);

  if (auto problems = check_report(r); !problems.empty()) throw InconsistentInput(problems.front());
  return r;
}

}  // namespace factcheck::scoring
