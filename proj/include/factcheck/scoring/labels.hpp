#pragma once

#include <optional>
#include <span>
#include <vector>

#include "factcheck/core/types.hpp"

namespace factcheck::scoring {

/// Thresholds that turn a factuality score into a label. Both bounds are
/// inclusive: f >= support is well supported, f <= refute is refuted.
struct LabelRule {
  double support_threshold = 0.8;
  double refute_threshold = 0.2;

  /// Throws std::invalid_argument unless 0 <= refute < support <= 1.
  void validate() const;
};

/// Empty stances -> unverifiable; supports and refutes both present ->
/// conflicting; otherwise by threshold: well_supported, refuted, or
/// controversial in between.
Label derive_label(double factuality, std::span<const Stance> stances, const LabelRule& rule = {});

bool to_binary_label(double factuality, const LabelRule& rule = {});

struct Aggregate {
  std::optional<double> credibility_percent;
  LabelCounts counts;
};

/// credibility = 100 * well_supported / verdicts; absent with no verdicts.
Aggregate aggregate(std::span<const ClaimVerdict> verdicts);
Aggregate aggregate(const std::vector<ClaimVerdict>& verdicts);

}  // namespace factcheck::scoring
