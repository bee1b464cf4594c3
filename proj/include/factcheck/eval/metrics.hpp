#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "factcheck/core/types.hpp"
#include "factcheck/eval/dataset.hpp"
#include "factcheck/scoring/labels.hpp"

namespace factcheck::eval {

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;    // gold instances of the label
  std::size_t predicted = 0;  // predictions of the label
  std::size_t true_positive = 0;
};

/// Per-label scores over the claims the checker answered. Abstentions are
/// excluded from both supports and counted separately.
struct MetricsRecord {
  LabelMetrics label_true;
  LabelMetrics label_false;
  std::size_t evaluated = 0;
  std::size_t abstentions = 0;
};

struct Prediction {
  bool gold = false;
  std::optional<bool> predicted;  // nullopt: the checker failed on this claim
};

/// P = TP/predicted, R = TP/support (0 when the denominator is 0),
/// F1 = 2PR/(P+R) or 0.
MetricsRecord evaluate_predictions(std::span<const Prediction> predictions);

/// Factuality in [0, 1] for one claim; throwing marks an abstention.
using Checker = std::function<double(const LabeledClaim&)>;

MetricsRecord evaluate(const std::vector<LabeledClaim>& claims, const Checker& checker,
                       const scoring::LabelRule& rule = {});

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

struct CostSummary {
  std::size_t samples = 0;
  Stat web_queries;
  Stat prompt_tokens;
  Stat completion_tokens;
  Stat wall_time;
};

Stat mean_stddev(std::span<const double> xs);
CostSummary summarize_costs(std::span<const CostRecord> records);

using CostRunner = std::function<CostRecord(const LabeledClaim&)>;
CostSummary profile(const std::vector<LabeledClaim>& claims, const CostRunner& runner);

}  // namespace factcheck::eval
