#include "factcheck/eval/harness.hpp"

#include <algorithm>
#include <cstdio>

#include "factcheck/core/text.hpp"

namespace factcheck::eval {

using Json = nlohmann::json;

namespace {

async::Task<void> worker(pipeline::Pipeline& pipeline, const std::vector<LabeledClaim>& claims, std::size_t& next,
                         std::vector<ClaimOutcome>& out) {
  while (next < claims.size()) {
    const auto i = next++;
    try {
      auto check = co_await pipeline.check_claim(claims[i].text);
      out[i].factuality = check.verdict.factuality;
      out[i].cost = check.cost;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  const auto n = text::utf8_length(s);
  if (n < width) s.append(width - n, ' ');
  return s;
}

Json stat_json(const Stat& s) { return Json{{"mean", s.mean}, {"std", s.stddev}}; }

Json label_json(const LabelMetrics& m) {
  return Json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1},
              {"support", m.support},     {"predicted", m.predicted}};
}

}  // namespace

async::Task<std::vector<ClaimOutcome>> check_claims(pipeline::Pipeline& pipeline, const std::vector<LabeledClaim>& claims,
                                                    std::size_t max_in_flight) {
  std::vector<ClaimOutcome> out(claims.size());
  std::size_t next = 0;
  std::vector<async::Task<void>> workers;
  const auto n = std::min(std::max<std::size_t>(max_in_flight, 1), std::max<std::size_t>(claims.size(), 1));
  for (std::size_t i = 0; i < n; ++i) workers.push_back(worker(pipeline, claims, next, out));
  co_await async::when_all(std::move(workers));
  co_return out;
}

EvalReport summarize(const Dataset& dataset, const std::vector<ClaimOutcome>& outcomes,
                     const scoring::LabelRule& rule, std::string checker) {
  EvalReport r;
  r.dataset = dataset.name;
  r.format = dataset.format;
  r.checker = std::move(checker);
  r.warnings = dataset.warnings;
  std::vector<Prediction> preds;
  std::vector<CostRecord> costs;
  for (std::size_t i = 0; i < outcomes.size() && i < dataset.claims.size(); ++i) {
    Prediction p{dataset.claims[i].gold, std::nullopt};
    if (outcomes[i].factuality) {
      p.predicted = scoring::to_binary_label(*outcomes[i].factuality, rule);
      costs.push_back(outcomes[i].cost);
    } else {
      r.warnings.push_back("claim " + std::to_string(i + 1) + " abstained: " + outcomes[i].error);
    }
    preds.push_back(p);
  }
  r.metrics = evaluate_predictions(preds);
  r.cost = summarize_costs(costs);
  return r;
}

EvalReport baseline(const Dataset& dataset, bool always_true) {
  EvalReport r;
  r.dataset = dataset.name;
  r.format = dataset.format;
  r.checker = always_true ? "always_true" : "always_false";
  r.warnings = dataset.warnings;
  r.metrics = evaluate(dataset.claims, [always_true](const LabeledClaim&) { return always_true ? 1.0 : 0.0; });
  return r;
}

Json to_json(const EvalReport& r) {
  Json j{{"dataset", r.dataset},
         {"format", std::string(to_string(r.format))},
         {"checker", r.checker},
         {"evaluated", r.metrics.evaluated},
         {"abstentions", r.metrics.abstentions},
         {"labels", Json{{"true", label_json(r.metrics.label_true)}, {"false", label_json(r.metrics.label_false)}}},
         {"warnings", r.warnings}};
  if (r.cost) {
    j["cost"] = Json{{"samples", r.cost->samples},
                     {"web_queries", stat_json(r.cost->web_queries)},
                     {"prompt_tokens", stat_json(r.cost->prompt_tokens)},
                     {"completion_tokens", stat_json(r.cost->completion_tokens)},
                     {"wall_time", stat_json(r.cost->wall_time)}};
  } else {
    j["cost"] = nullptr;
  }
  return j;
}

std::string format_metrics_table(const EvalReport& r) {
  std::string out = pad("Checker", 16) + pad("Dataset", 18) + pad("Label", 7) + pad("P", 7) + pad("R", 7) +
                    pad("F1", 7) + "Support\n";
  auto row = [&](const char* label, const LabelMetrics& m) {
    out += pad(r.checker, 16) + pad(r.dataset, 18) + pad(label, 7) + pad(fixed(m.precision, 2), 7) +
           pad(fixed(m.recall, 2), 7) + pad(fixed(m.f1, 2), 7) + std::to_string(m.support) + "\n";
  };
  row("True", r.metrics.label_true);
  row("False", r.metrics.label_false);
  out += "Evaluated " + std::to_string(r.metrics.evaluated) + ", abstained " + std::to_string(r.metrics.abstentions) +
         "\n";
  return out;
}

std::string format_cost_table(const EvalReport& r) {
  if (!r.cost) return "No cost recorded for checker " + r.checker + "\n";
  const auto& c = *r.cost;
  auto pm = [](const Stat& s, int digits) { return fixed(s.mean, digits) + " ± " + fixed(s.stddev, digits); };
  std::string out = pad("Checker", 16) + pad("Samples", 9) + pad("#Queries", 16) + pad("Prompt tokens", 22) +
                    pad("Completion tokens", 22) + "Time (s / sample)\n";
  out += pad(r.checker, 16) + pad(std::to_string(c.samples), 9) + pad(pm(c.web_queries, 2), 16) +
         pad(pm(c.prompt_tokens, 1), 22) + pad(pm(c.completion_tokens, 1), 22) + pm(c.wall_time, 2) + "\n";
  return out;
}

}  // namespace factcheck::eval
