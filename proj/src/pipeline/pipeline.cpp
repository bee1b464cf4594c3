#include "factcheck/pipeline/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "factcheck/core/error.hpp"
#include "factcheck/core/text.hpp"
#include "factcheck/scoring/report.hpp"

namespace factcheck::pipeline {

using async::Future;
using async::Task;

std::string_view to_string(RankerKind k) {
  switch (k) {
    case RankerKind::lexical: return "lexical";
    case RankerKind::nli_plugin: return "nli_plugin";
    case RankerKind::none: return "none";
  }
  return "lexical";
}

RankerKind parse_ranker_kind(std::string_view s) {
  for (auto k : {RankerKind::lexical, RankerKind::nli_plugin, RankerKind::none})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown ranker '" + std::string(s) + "'");
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::decompose: return "decompose";
    case Stage::checkworthiness: return "checkworthiness";
    case Stage::query_generation: return "query_generation";
    case Stage::evidence_retrieval: return "evidence_retrieval";
    case Stage::claim_verification: return "claim_verification";
  }
  return "decompose";
}

void PipelineConfig::validate() const {
  label_rule.validate();
  if (queries_per_claim < 1) throw std::invalid_argument("queries_per_claim must be >= 1");
  if (results_per_query < 1) throw std::invalid_argument("results_per_query must be >= 1");
  if (ranker == RankerKind::nli_plugin && !nli_ranker)
    throw std::invalid_argument("ranker nli_plugin selected but no plugin was supplied");
}

namespace {

int attempts_in(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const ExhaustedRetries& x) {
    return x.attempts;
  } catch (const NonRetryable& x) {
    return x.attempts;
  } catch (...) {
    return 0;
  }
}

std::string describe(const std::exception_ptr& e) {
  try {
    std::rethrow_exception(e);
  } catch (const std::exception& x) {
    return x.what();
  } catch (...) {
    return "unknown error";
  }
}

std::string query_key(const std::string& q) { return text::to_lower_ascii(text::collapse_whitespace(q)); }

ClaimVerdict unverifiable_verdict(const std::string& claim_id) {
  return ClaimVerdict{claim_id, 0.5, Label::unverifiable, {}};
}

}  // namespace

std::vector<std::string> finalize_queries(const std::string& claim_text, std::vector<std::string> proposed,
                                          std::size_t count) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  auto offer = [&](const std::string& q) {
    if (out.size() == count) return;
    auto cleaned = text::collapse_whitespace(q);
    if (cleaned.empty()) return;
    if (seen.insert(query_key(cleaned)).second) out.push_back(std::move(cleaned));
  };
  for (const auto& q : proposed) offer(q);
  if (out.size() == count) return out;

  // Fallbacks from the claim's content words: all of them, each half, then
  // one word at a time, and the claim itself as a last resort.
  std::vector<std::string> words;
  for (const auto& t : text::content_tokens(claim_text)) words.push_back(t.surface);
  auto join = [](auto first, auto last) {
    std::string s;
    for (auto it = first; it != last; ++it) {
      if (!s.empty()) s.push_back(' ');
      s += *it;
    }
    return s;
  };
  offer(join(words.begin(), words.end()));
  if (words.size() > 1) {
    const auto mid = words.begin() + static_cast<std::ptrdiff_t>(words.size() / 2);
    offer(join(words.begin(), mid));
    offer(join(mid, words.end()));
  }
  for (const auto& w : words) offer(w);
  offer(claim_text);
  for (std::size_t n = 2; out.size() < count; ++n) offer(claim_text + " " + std::to_string(n));
  return out;
}

std::vector<EvidenceItem> apply_stances(std::vector<EvidenceItem> evidence, const llm::Verification& v) {
  std::vector<bool> assigned(evidence.size(), false);
  auto assign = [&](std::size_t i, const llm::StanceJudgement& j) {
    evidence[i].stance = j.stance;
    evidence[i].reasoning = j.reasoning.empty() ? v.reasoning : j.reasoning;
    assigned[i] = true;
  };
  for (const auto& j : v.stances)
    if (j.evidence && *j.evidence >= 1 && *j.evidence <= evidence.size() && !assigned[*j.evidence - 1])
      assign(*j.evidence - 1, j);
  std::size_t pos = 0;
  for (const auto& j : v.stances) {
    if (j.evidence) continue;
    while (pos < evidence.size() && assigned[pos]) ++pos;
    if (pos == evidence.size()) break;
    assign(pos, j);
  }
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (!assigned[i]) {
      evidence[i].stance = Stance::irrelevant;
      if (evidence[i].reasoning.empty()) evidence[i].reasoning = v.reasoning;
    }
  }
  return evidence;
}

std::string format_evidence(const std::vector<EvidenceItem>& evidence) {
  std::string out;
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (i) out.push_back('\n');
    out += "[" + std::to_string(i + 1) + "] " + text::collapse_whitespace(evidence[i].snippet);
    if (!evidence[i].url.empty()) out += " (source: " + evidence[i].url + ")";
  }
  return out;
}

Pipeline::Pipeline(std::shared_ptr<llm::Gateway> gateway, std::shared_ptr<retrieval::SearchClient> search,
                   llm::RetryPolicy search_retry, PipelineConfig config)
    : gateway_(std::move(gateway)),
      search_(std::move(search)),
      search_retry_(std::move(search_retry)),
      config_(std::move(config)) {
  if (!gateway_ || !search_) throw std::invalid_argument("pipeline needs a gateway and a search client");
  config_.validate();
  search_retry_.validate();
  switch (config_.ranker) {
    case RankerKind::lexical: ranker_ = std::make_shared<retrieval::LexicalRanker>(); break;
    case RankerKind::none: ranker_ = std::make_shared<retrieval::NullRanker>(); break;
    case RankerKind::nli_plugin: ranker_ = config_.nli_ranker; break;
  }
}

const retrieval::Ranker& Pipeline::ranker() const { return *ranker_; }

Task<std::vector<Claim>> Pipeline::decompose(RunContext& run, const Document& document) {
  if (text::trim(document.text).empty()) throw EmptyDocument();
  if (!gateway_->templates().supports(document.language)) throw UnsupportedLanguage(document.language);

  auto& loop = async::EventLoop::current();
  StageTrace trace{Stage::decompose, std::nullopt, loop.now(), loop.now(), 0, 0};
  std::exception_ptr failure;
  llm::CallResult result;
  try {
    llm::Bindings bindings{{"doc", document.text}};
    llm::Validator validate = [](const std::string& t) { llm::parse_claim_list(t); };
    result = co_await gateway_->ask(llm::LlmTask::decompose, document.language, std::move(bindings), run.cost,
                                    std::move(validate));
  } catch (...) {
    failure = std::current_exception();
  }
  trace.end = loop.now();
  trace.llm_calls = failure ? attempts_in(failure) : result.attempts;
  run.traces.push_back(trace);
  if (failure) std::rethrow_exception(failure);

  std::vector<Claim> claims;
  for (auto& raw : llm::parse_claim_list(result.text).claims) {
    auto t = text::trim(raw);
    if (t.empty()) continue;
    Claim c;
    c.id = "c" + std::to_string(claims.size() + 1);
    c.document_id = document.id;
    c.spans = map_claim_to_spans(document, t, config_.spans);
    c.text = std::move(t);
    claims.push_back(std::move(c));
  }
  const auto sentences = text::count_sentences(document.text);
  if (claims.size() < sentences)
    run.warn("decomposition returned " + std::to_string(claims.size()) + " claim(s) for " +
             std::to_string(sentences) + " sentence(s)");
  for (const auto& c : claims)
    if (c.spans.empty()) run.warn("claim " + c.id + " could not be located in the source text");
  co_return claims;
}

Task<std::vector<Claim>> Pipeline::identify_checkworthiness(RunContext& run, std::vector<Claim> claims) {
  if (claims.empty()) co_return claims;
  auto& loop = async::EventLoop::current();
  StageTrace trace{Stage::checkworthiness, std::nullopt, loop.now(), loop.now(), 0, 0};

  std::string listing;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (i) listing.push_back('\n');
    listing += std::to_string(i + 1) + ". " + claims[i].text;
  }
  std::exception_ptr failure;
  llm::CallResult result;
  try {
    llm::Bindings bindings{{"claims", listing}};
    llm::Validator validate = [](const std::string& t) { llm::parse_checkworthiness(t); };
    result = co_await gateway_->ask(llm::LlmTask::checkworthiness, run.language, std::move(bindings), run.cost,
                                    std::move(validate));
  } catch (...) {
    failure = std::current_exception();
  }
  trace.end = loop.now();
  trace.llm_calls = failure ? attempts_in(failure) : result.attempts;
  run.traces.push_back(trace);
  if (failure) {
    run.warn("checkworthiness could not be determined: " + describe(failure));
    co_return claims;
  }

  const auto judged = llm::parse_checkworthiness(result.text).results;
  std::vector<std::optional<llm::CheckworthinessJudgement>> match(claims.size());
  if (judged.size() == claims.size()) {
    for (std::size_t i = 0; i < claims.size(); ++i) match[i] = judged[i];
  } else {
    std::vector<bool> used(judged.size(), false);
    for (std::size_t i = 0; i < claims.size(); ++i) {
      const auto key = query_key(claims[i].text);
      for (std::size_t k = 0; k < judged.size(); ++k) {
        if (!used[k] && query_key(text::trim(judged[k].claim)) == key) {
          match[i] = judged[k];
          used[k] = true;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < claims.size(); ++i) {
    auto& c = claims[i];
    if (!match[i]) {
      run.warn("claim " + c.id + " received no checkworthiness judgement");
      continue;
    }
    if (match[i]->worthy) {
      c.checkworthy = Checkworthiness::worthy;
    } else {
      c.checkworthy = Checkworthiness::unworthy;
      c.unworthy_reason = match[i]->reason.empty() ? std::string("judged not check-worthy") : match[i]->reason;
    }
  }
  co_return claims;
}

Task<std::vector<SearchQuery>> Pipeline::generate_queries(RunContext& run, Claim claim) {
  auto& loop = async::EventLoop::current();
  StageTrace trace{Stage::query_generation, claim.id, loop.now(), loop.now(), 0, 0};
  std::exception_ptr failure;
  llm::CallResult result;
  try {
    llm::Bindings bindings{{"claim", claim.text}};
    llm::Validator validate = [](const std::string& t) { llm::parse_query_list(t); };
    result = co_await gateway_->ask(llm::LlmTask::query_gen, run.language, std::move(bindings), run.cost,
                                    std::move(validate));
  } catch (...) {
    failure = std::current_exception();
  }
  trace.end = loop.now();
  trace.llm_calls = failure ? attempts_in(failure) : result.attempts;
  run.traces.push_back(trace);
  if (failure) std::rethrow_exception(failure);

  auto proposed = llm::parse_query_list(result.text).queries;
  if (proposed.size() > static_cast<std::size_t>(config_.queries_per_claim))
    proposed.resize(static_cast<std::size_t>(config_.queries_per_claim));
  std::vector<SearchQuery> out;
  for (auto& q : finalize_queries(claim.text, std::move(proposed), static_cast<std::size_t>(config_.queries_per_claim)))
    out.push_back(SearchQuery{claim.id, std::move(q)});
  co_return out;
}

Task<std::vector<EvidenceItem>> Pipeline::retrieve_evidence(RunContext& run, Claim claim,
                                                            std::vector<SearchQuery> queries) {
  auto& loop = async::EventLoop::current();
  StageTrace trace{Stage::evidence_retrieval, claim.id, loop.now(), loop.now(), 0, 0};

  std::vector<int> attempts(queries.size(), 0);
  auto one = [](Pipeline& self, RunContext& run, SearchQuery q, int& attempts) -> Task<std::optional<retrieval::SearchResponse>> {
    try {
      co_return co_await retrieval::search(*self.search_, q, self.search_retry_, &run.cost, &attempts);
    } catch (const std::exception& e) {
      run.warn("search for claim " + q.claim_id + " query \"" + q.text + "\" failed: " + e.what());
    }
    co_return std::nullopt;
  };
  std::vector<Task<std::optional<retrieval::SearchResponse>>> tasks;
  for (std::size_t i = 0; i < queries.size(); ++i) tasks.push_back(one(*this, run, queries[i], attempts[i]));
  auto results = co_await async::when_all(std::move(tasks));

  std::vector<retrieval::SearchResponse> responses;
  for (auto& r : results)
    if (r) responses.push_back(std::move(*r));
  std::vector<EvidenceItem> evidence;
  std::exception_ptr failure;
  try {
    evidence = retrieval::extract_evidence(claim, responses, ranker(),
                                           static_cast<std::size_t>(config_.results_per_query));
  } catch (...) {
    failure = std::current_exception();
  }
  trace.end = loop.now();
  for (int a : attempts) trace.web_calls += a;
  run.traces.push_back(trace);
  if (failure) std::rethrow_exception(failure);
  co_return evidence;
}

Task<ClaimVerdict> Pipeline::verify_claim(RunContext& run, Claim claim, std::vector<EvidenceItem> evidence) {
  auto& loop = async::EventLoop::current();
  StageTrace trace{Stage::claim_verification, claim.id, loop.now(), loop.now(), 0, 0};
  if (evidence.empty()) {
    run.traces.push_back(trace);
    co_return unverifiable_verdict(claim.id);
  }

  std::exception_ptr failure;
  llm::CallResult result;
  try {
    llm::Bindings bindings{{"claim", claim.text}, {"evidence", format_evidence(evidence)}};
    llm::Validator validate = [](const std::string& t) { llm::parse_verification(t); };
    result = co_await gateway_->ask(llm::LlmTask::verify, run.language, std::move(bindings), run.cost,
                                    std::move(validate));
  } catch (...) {
    failure = std::current_exception();
  }
  trace.end = loop.now();
  trace.llm_calls = failure ? attempts_in(failure) : result.attempts;
  run.traces.push_back(trace);
  if (failure) std::rethrow_exception(failure);

  const auto verification = llm::parse_verification(result.text);
  ClaimVerdict v;
  v.claim_id = claim.id;
  v.factuality = verification.factuality;
  v.evidence = apply_stances(std::move(evidence), verification);
  for (auto& e : v.evidence) e.claim_id = claim.id;
  std::vector<Stance> stances;
  for (const auto& e : v.evidence) stances.push_back(e.stance);
  v.label = scoring::derive_label(v.factuality, stances, config_.label_rule);
  co_return v;
}

Task<std::optional<ClaimVerdict>> Pipeline::claim_flow(RunContext& run, std::size_t index,
                                                       Future<std::vector<Claim>> labeled,
                                                       Future<std::vector<SearchQuery>> queries) {
  const auto claims = co_await labeled;
  const Claim claim = claims[index];
  if (claim.checkworthy != Checkworthiness::worthy) co_return std::nullopt;

  std::vector<SearchQuery> qs;
  try {
    qs = co_await queries;
  } catch (const std::exception& e) {
    run.warn("query generation for claim " + claim.id + " failed: " + e.what());
    co_return unverifiable_verdict(claim.id);
  }

  std::vector<EvidenceItem> evidence;
  try {
    evidence = co_await retrieve_evidence(run, claim, std::move(qs));
  } catch (const std::exception& e) {
    run.warn("evidence retrieval for claim " + claim.id + " failed: " + e.what());
    co_return unverifiable_verdict(claim.id);
  }

  try {
    co_return co_await verify_claim(run, claim, std::move(evidence));
  } catch (const std::exception& e) {
    run.warn("verification of claim " + claim.id + " failed: " + e.what());
  }
  co_return unverifiable_verdict(claim.id);
}

Task<PipelineResult> Pipeline::run(Document document) {
  auto& loop = async::EventLoop::current();
  const auto started = loop.now();
  if (document.id.empty()) document.id = document_id_for(document.text);

  RunContext run;
  run.language = document.language;
  auto claims = co_await decompose(run, document);

  auto labeled = async::spawn(identify_checkworthiness(run, claims));
  std::vector<Future<std::vector<SearchQuery>>> query_futures;
  query_futures.reserve(claims.size());
  for (const auto& c : claims) query_futures.push_back(async::spawn(generate_queries(run, c)));

  std::vector<Task<std::optional<ClaimVerdict>>> flows;
  for (std::size_t i = 0; i < claims.size(); ++i) flows.push_back(claim_flow(run, i, labeled, query_futures[i]));
  auto outcomes = co_await async::when_all(std::move(flows));

  // Queries for unworthy claims are still owed to nobody; wait them out so
  // no task outlives `run`.
  for (auto& f : query_futures) {
    try {
      co_await f;
    } catch (...) {
    }
  }
  auto final_claims = co_await labeled;

  std::vector<ClaimVerdict> verdicts;
  for (auto& o : outcomes)
    if (o) verdicts.push_back(std::move(*o));
  for (const auto& c : final_claims)
    if (c.checkworthy == Checkworthiness::undetermined)
      run.warn("claim " + c.id + " excluded from scoring: checkworthiness undetermined");
  std::stable_sort(run.warnings.begin(), run.warnings.end());

  const auto cost = run.cost.snapshot(async::to_seconds(loop.now() - started));
  PipelineResult result;
  result.report = scoring::assemble_report(document, std::move(final_claims), verdicts, cost, run.warnings);
  result.traces = std::move(run.traces);
  result.llm_invocations = run.cost.llm_invocations();
  co_return result;
}

Task<ClaimCheck> Pipeline::check_claim(std::string claim_text) {
  auto& loop = async::EventLoop::current();
  const auto started = loop.now();
  RunContext run;
  run.language = config_.language;
  Claim claim;
  claim.id = "c1";
  claim.document_id = document_id_for(claim_text);
  claim.text = text::trim(claim_text);
  claim.checkworthy = Checkworthiness::worthy;

  auto queries = co_await generate_queries(run, claim);
  auto evidence = co_await retrieve_evidence(run, claim, std::move(queries));
  auto verdict = co_await verify_claim(run, claim, std::move(evidence));
  co_return ClaimCheck{std::move(verdict), run.cost.snapshot(async::to_seconds(loop.now() - started)),
                       std::move(run.warnings)};
}

PipelineResult run_pipeline(Pipeline& pipeline, const Document& document, async::ClockMode clock) {
  async::EventLoop loop(clock);
  return loop.run(pipeline.run(document));
}

}  // namespace factcheck::pipeline
