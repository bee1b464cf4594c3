#include "factcheck/scoring/labels.hpp"

#include <algorithm>
#include <stdexcept>

namespace factcheck::scoring {

void LabelRule::validate() const {
  if (!(refute_threshold >= 0.0 && refute_threshold < support_threshold && support_threshold <= 1.0))
    throw std::invalid_argument("label thresholds must satisfy 0 <= refute < support <= 1");
}

Label derive_label(double factuality, std::span<const Stance> stances, const LabelRule& rule) {
  if (stances.empty()) return Label::unverifiable;
  const bool supports = std::find(stances.begin(), stances.end(), Stance::supports) != stances.end();
  const bool refutes = std::find(stances.begin(), stances.end(), Stance::refutes) != stances.end();
  if (supports && refutes) return Label::conflicting;
  if (factuality >= rule.support_threshold) return Label::well_supported;
  if (factuality <= rule.refute_threshold) return Label::refuted;
  return Label::controversial;
}

bool to_binary_label(double factuality, const LabelRule& rule) { return factuality >= rule.support_threshold; }

Aggregate aggregate(std::span<const ClaimVerdict> verdicts) {
  Aggregate a;
  for (const auto& v : verdicts) ++a.counts[v.label];
  if (!verdicts.empty())
    a.credibility_percent =
        100.0 * static_cast<double>(a.counts[Label::well_supported]) / static_cast<double>(verdicts.size());
  return a;
}

Aggregate aggregate(const std::vector<ClaimVerdict>& verdicts) {
  return aggregate(std::span<const ClaimVerdict>(verdicts.data(), verdicts.size()));
}

}  // namespace factcheck::scoring
