#include "factcheck/eval/metrics.hpp"

#include <cmath>

namespace factcheck::eval {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void finish(LabelMetrics& m) {
  m.precision = ratio(m.true_positive, m.predicted);
  m.recall = ratio(m.true_positive, m.support);
  const double s = m.precision + m.recall;
  m.f1 = s > 0.0 ? 2.0 * m.precision * m.recall / s : 0.0;
}

}  // namespace

MetricsRecord evaluate_predictions(std::span<const Prediction> predictions) {
  MetricsRecord r;
  for (const auto& p : predictions) {
    if (!p.predicted) {
      ++r.abstentions;
      continue;
    }
    ++r.evaluated;
    auto& gold = p.gold ? r.label_true : r.label_false;
    auto& pred = *p.predicted ? r.label_true : r.label_false;
    ++gold.support;
    ++pred.predicted;
    if (p.gold == *p.predicted) ++gold.true_positive;
  }
  finish(r.label_true);
  finish(r.label_false);
  return r;
}

MetricsRecord evaluate(const std::vector<LabeledClaim>& claims, const Checker& checker,
                       const scoring::LabelRule& rule) {
  rule.validate();
  std::vector<Prediction> preds;
  preds.reserve(claims.size());
  for (const auto& c : claims) {
    Prediction p{c.gold, std::nullopt};
    try {
      p.predicted = scoring::to_binary_label(checker(c), rule);
    } catch (const std::exception&) {
    }
    preds.push_back(p);
  }
  return evaluate_predictions(preds);
}

Stat mean_stddev(std::span<const double> xs) {
  if (xs.empty()) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

CostSummary summarize_costs(std::span<const CostRecord> records) {
  CostSummary s;
  s.samples = records.size();
  std::vector<double> q, p, c, w;
  for (const auto& r : records) {
    q.push_back(static_cast<double>(r.web_queries));
    p.push_back(static_cast<double>(r.prompt_tokens));
    c.push_back(static_cast<double>(r.completion_tokens));
    w.push_back(r.wall_time);
  }
  s.web_queries = mean_stddev(q);
  s.prompt_tokens = mean_stddev(p);
  s.completion_tokens = mean_stddev(c);
  s.wall_time = mean_stddev(w);
  return s;
}

CostSummary profile(const std::vector<LabeledClaim>& claims, const CostRunner& runner) {
  std::vector<CostRecord> records;
  records.reserve(claims.size());
  for (const auto& c : claims) records.push_back(runner(c));
  return summarize_costs(records);
}

}  // namespace factcheck::eval
