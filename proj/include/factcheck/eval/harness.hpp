#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "factcheck/async/task.hpp"
#include "factcheck/eval/dataset.hpp"
#include "factcheck/eval/metrics.hpp"
#include "factcheck/pipeline/pipeline.hpp"

namespace factcheck::eval {

struct ClaimOutcome {
  std::optional<double> factuality;  // absent when the check failed
  CostRecord cost;
  std::string error;
};

/// Runs Pipeline::check_claim on every claim, at most `max_in_flight` at a
/// time. Failures are recorded, not thrown. Must run on an event loop.
async::Task<std::vector<ClaimOutcome>> check_claims(pipeline::Pipeline& pipeline, const std::vector<LabeledClaim>& claims,
                                                    std::size_t max_in_flight = 8);

struct EvalReport {
  std::string dataset;
  DatasetFormat format = DatasetFormat::unified;
  std::string checker;
  MetricsRecord metrics;
  std::optional<CostSummary> cost;  // only for runs that made calls
  std::vector<std::string> warnings;
};

/// Metrics over the outcomes, and the cost profile over the checks that
/// completed.
EvalReport summarize(const Dataset& dataset, const std::vector<ClaimOutcome>& outcomes,
                     const scoring::LabelRule& rule, std::string checker);

/// Constant-answer baselines.
EvalReport baseline(const Dataset& dataset, bool always_true);

nlohmann::json to_json(const EvalReport& r);

/// Plain-text table: one row per label with P, R, F1 and support.
std::string format_metrics_table(const EvalReport& r);

/// Plain-text table of per-sample cost, mean ± population standard deviation.
std::string format_cost_table(const EvalReport& r);

}  // namespace factcheck::eval
