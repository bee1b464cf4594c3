#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "factcheck/async/event_loop.hpp"
#include "factcheck/core/spans.hpp"
#include "factcheck/core/types.hpp"
#include "factcheck/llm/gateway.hpp"
#include "factcheck/llm/structured_output.hpp"
#include "factcheck/retrieval/evidence.hpp"
#include "factcheck/retrieval/search.hpp"
#include "factcheck/scoring/labels.hpp"

namespace factcheck::pipeline {

enum class RankerKind { lexical, nli_plugin, none };

std::string_view to_string(RankerKind k);
RankerKind parse_ranker_kind(std::string_view s);

struct PipelineConfig {
  std::string language = "en";
  int queries_per_claim = 3;
  int results_per_query = 5;
  scoring::LabelRule label_rule;
  RankerKind ranker = RankerKind::lexical;
  /// Required when ranker == nli_plugin.
  std::shared_ptr<const retrieval::Ranker> nli_ranker;
  SpanMatchOptions spans;

  void validate() const;
};

enum class Stage { decompose, checkworthiness, query_generation, evidence_retrieval, claim_verification };

std::string_view to_string(Stage s);

struct StageTrace {
  Stage stage = Stage::decompose;
  std::optional<std::string> claim_id;
  async::Timestamp start{0};
  async::Timestamp end{0};
  int llm_calls = 0;
  int web_calls = 0;
};

/// Mutable state of one pipeline execution. Only touched from the loop
/// thread that runs it.
struct RunContext {
  llm::CostAccumulator cost;
  std::vector<StageTrace> traces;
  std::vector<std::string> warnings;
  std::string language = "en";

  void warn(std::string message) { warnings.push_back(std::move(message)); }
};

struct PipelineResult {
  FactReport report;
  std::vector<StageTrace> traces;
  std::uint64_t llm_invocations = 0;
};

/// Outcome of checking one pre-extracted claim (decomposition bypassed).
struct ClaimCheck {
  ClaimVerdict verdict;
  CostRecord cost;
  std::vector<std::string> warnings;
};

/// Query list post-processing: drop blanks, de-duplicate (case- and
/// whitespace-insensitive), keep the first `count`, and pad with queries
/// built from the claim's content words when fewer remain.
std::vector<std::string> finalize_queries(const std::string& claim_text, std::vector<std::string> proposed,
                                          std::size_t count);

/// Copies verifier stances onto evidence. Judgements carrying an evidence
/// number go to that item; the rest are matched by position. Items left
/// without a judgement are irrelevant. Empty per-item reasoning falls back to
/// the overall reasoning.
std::vector<EvidenceItem> apply_stances(std::vector<EvidenceItem> evidence, const llm::Verification& v);

/// "[1] snippet (source: url)" lines as shown to the verifier.
std::string format_evidence(const std::vector<EvidenceItem>& evidence);

/// The five stages and the scheduler that runs them.
///
/// Dependency graph per document:
///
///   decompose ──┬── checkworthiness (all claims, one call) ──┐
///               └── query generation (per claim) ────────────┴── retrieval ── verification
///
/// Checkworthiness and query generation both depend only on decomposition
/// and run concurrently; a claim is searched once both are done and it was
/// judged worthy. Claims proceed independently of one another, so the
/// critical path is three LLM calls plus one round of web queries.
class Pipeline {
 public:
  Pipeline(std::shared_ptr<llm::Gateway> gateway, std::shared_ptr<retrieval::SearchClient> search,
           llm::RetryPolicy search_retry, PipelineConfig config = {});

  const PipelineConfig& config() const { return config_; }
  llm::Gateway& gateway() { return *gateway_; }

  async::Task<std::vector<Claim>> decompose(RunContext& run, const Document& document);
  async::Task<std::vector<Claim>> identify_checkworthiness(RunContext& run, std::vector<Claim> claims);
  async::Task<std::vector<SearchQuery>> generate_queries(RunContext& run, Claim claim);
  async::Task<std::vector<EvidenceItem>> retrieve_evidence(RunContext& run, Claim claim,
                                                           std::vector<SearchQuery> queries);
  async::Task<ClaimVerdict> verify_claim(RunContext& run, Claim claim, std::vector<EvidenceItem> evidence);

  /// Whole document to report. Fails only when decomposition fails; any
  /// other per-claim failure becomes a warning and leaves the claim
  /// unverifiable (or undetermined, for checkworthiness).
  async::Task<PipelineResult> run(Document document);

  /// Claim-level path used for evaluation: the claim is taken as worthy and
  /// goes straight to query generation.
  async::Task<ClaimCheck> check_claim(std::string claim_text);

 private:
  const retrieval::Ranker& ranker() const;
  async::Task<std::optional<ClaimVerdict>> claim_flow(RunContext& run, std::size_t index,
                                                      async::Future<std::vector<Claim>> labeled,
                                                      async::Future<std::vector<SearchQuery>> queries);

  std::shared_ptr<llm::Gateway> gateway_;
  std::shared_ptr<retrieval::SearchClient> search_;
  llm::RetryPolicy search_retry_;
  PipelineConfig config_;
  std::shared_ptr<const retrieval::Ranker> ranker_;
};

/// Runs `pipeline.run(document)` on a fresh event loop.
PipelineResult run_pipeline(Pipeline& pipeline, const Document& document,
                            async::ClockMode clock = async::ClockMode::realtime);

}  // namespace factcheck::pipeline
