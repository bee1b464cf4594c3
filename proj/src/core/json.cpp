#include "factcheck/core/json.hpp"

#include "factcheck/core/error.hpp"

namespace factcheck {

namespace {

template <typename T>
T required(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T optional_value(const Json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  return it->get<T>();
}

}  // namespace

void to_json(Json& j, const Document& d) {
  j = Json{{"id", d.id}, {"text", d.text}, {"language", d.language}};
}

void from_json(const Json& j, Document& d) {
  d.id = required<std::string>(j, "id");
  d.text = required<std::string>(j, "text");
  d.language = required<std::string>(j, "language");
}

void to_json(Json& j, const ClaimSpan& s) { j = Json{{"start", s.start}, {"end", s.end}}; }

void from_json(const Json& j, ClaimSpan& s) {
  s.start = required<std::size_t>(j, "start");
  s.end = required<std::size_t>(j, "end");
}

void to_json(Json& j, const Claim& c) {
  j = Json{{"id", c.id},
           {"document_id", c.document_id},
           {"text", c.text},
           {"spans", c.spans},
           {"checkworthy", to_string(c.checkworthy)},
           {"unworthy_reason", c.unworthy_reason ? Json(*c.unworthy_reason) : Json(nullptr)}};
}

void from_json(const Json& j, Claim& c) {
  c.id = required<std::string>(j, "id");
  c.document_id = required<std::string>(j, "document_id");
  c.text = required<std::string>(j, "text");
  c.spans = required<std::vector<ClaimSpan>>(j, "spans");
  c.checkworthy = parse_checkworthiness(required<std::string>(j, "checkworthy"));
  if (auto it = j.find("unworthy_reason"); it != j.end() && !it->is_null())
    c.unworthy_reason = it->get<std::string>();
  else
    c.unworthy_reason.reset();
}

void to_json(Json& j, const SearchQuery& q) { j = Json{{"claim_id", q.claim_id}, {"text", q.text}}; }

void from_json(const Json& j, SearchQuery& q) {
  q.claim_id = required<std::string>(j, "claim_id");
  q.text = required<std::string>(j, "text");
}

void to_json(Json& j, const EvidenceItem& e) {
  j = Json{{"claim_id", e.claim_id},   {"url", e.url},
           {"source_title", e.source_title}, {"snippet", e.snippet},
           {"stance", to_string(e.stance)},  {"relevance", e.relevance},
           {"reasoning", e.reasoning},       {"is_direct_answer", e.is_direct_answer}};
}

void from_json(const Json& j, EvidenceItem& e) {
  e.claim_id = required<std::string>(j, "claim_id");
  e.url = required<std::string>(j, "url");
  e.source_title = optional_value<std::string>(j, "source_title", "");
  e.snippet = required<std::string>(j, "snippet");
  e.stance = parse_stance(required<std::string>(j, "stance"));
  e.relevance = required<double>(j, "relevance");
  e.reasoning = optional_value<std::string>(j, "reasoning", "");
  e.is_direct_answer = optional_value<bool>(j, "is_direct_answer", false);
}

void to_json(Json& j, const ClaimVerdict& v) {
  Json summary{{"supports", 0}, {"refutes", 0}, {"irrelevant", 0}};
  for (const auto& e : v.evidence) {
    auto& slot = summary[std::string(to_string(e.stance))];
    slot = slot.get<int>() + 1;
  }
  j = Json{{"claim_id", v.claim_id},
           {"factuality", v.factuality},
           {"label", to_string(v.label)},
           {"evidence_summary", std::move(summary)},
           {"evidence", v.evidence}};
}

void from_json(const Json& j, ClaimVerdict& v) {
  v.claim_id = required<std::string>(j, "claim_id");
  v.factuality = required<double>(j, "factuality");
  v.label = parse_label(required<std::string>(j, "label"));
  v.evidence = required<std::vector<EvidenceItem>>(j, "evidence");
}

void to_json(Json& j, const LabelCounts& c) {
  j = Json::object();
  for (auto l : kAllLabels) j[std::string(to_string(l))] = c[l];
}

void from_json(const Json& j, LabelCounts& c) {
  c = LabelCounts{};
  for (auto l : kAllLabels) c[l] = optional_value<std::size_t>(j, std::string(to_string(l)).c_str(), 0);
}

void to_json(Json& j, const CostRecord& c) {
  j = Json{{"web_queries", c.web_queries},
           {"prompt_tokens", c.prompt_tokens},
           {"completion_tokens", c.completion_tokens},
           {"wall_time", c.wall_time},
           {"tokens_estimated", c.tokens_estimated}};
}

void from_json(const Json& j, CostRecord& c) {
  c.web_queries = required<std::uint64_t>(j, "web_queries");
  c.prompt_tokens = required<std::uint64_t>(j, "prompt_tokens");
  c.completion_tokens = required<std::uint64_t>(j, "completion_tokens");
  c.wall_time = required<double>(j, "wall_time");
  c.tokens_estimated = optional_value<bool>(j, "tokens_estimated", false);
}

void to_json(Json& j, const FactReport& r) {
  // Level 2 rows carry the verdict label next to each claim so a viewer can
  // colour highlights without joining against the verdict map.
  Json claims = Json::array();
  for (const auto& c : r.claims) {
    Json row = c;
    if (auto it = r.verdicts.find(c.id); it != r.verdicts.end()) {
      row["label"] = to_string(it->second.label);
      row["factuality"] = it->second.factuality;
    } else {
      row["label"] = nullptr;
      row["factuality"] = nullptr;
    }
    claims.push_back(std::move(row));
  }
  Json verdicts = Json::object();
  for (const auto& [id, v] : r.verdicts) verdicts[id] = v;

  j = Json{{"schema_version", kReportSchemaVersion},
           {"document", r.document},
           {"credibility_percent", r.credibility_percent ? Json(*r.credibility_percent) : Json(nullptr)},
           {"counts", r.counts},
           {"claims", std::move(claims)},
           {"verdicts", std::move(verdicts)},
           {"cost", r.cost},
           {"created_at", r.created_at},
           {"warnings", r.warnings}};
}

void from_json(const Json& j, FactReport& r) {
  if (!j.is_object()) throw FormatError("report must be a JSON object");
  r.document = required<Document>(j, "document");
  r.claims = required<std::vector<Claim>>(j, "claims");
  r.verdicts.clear();
  const auto verdicts = required<Json>(j, "verdicts");
  if (!verdicts.is_object()) throw FormatError("'verdicts' must be an object");
  for (const auto& [id, v] : verdicts.items()) r.verdicts[id] = v.get<ClaimVerdict>();
  if (auto it = j.find("credibility_percent"); it != j.end() && !it->is_null())
    r.credibility_percent = it->get<double>();
  else
    r.credibility_percent.reset();
  r.counts = required<LabelCounts>(j, "counts");
  r.cost = required<CostRecord>(j, "cost");
  r.created_at = optional_value<std::string>(j, "created_at", "");
  r.warnings = optional_value<std::vector<std::string>>(j, "warnings", {});
}

std::string dump_canonical(const Json& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string to_canonical_json(const FactReport& report) { return dump_canonical(Json(report)); }

FactReport report_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid report JSON: ") + e.what());
  }
  try {
    return j.get<FactReport>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid report: ") + e.what());
  }
}

Json mask_volatile(Json report) {
  if (report.contains("created_at")) report["created_at"] = "<masked>";
  if (report.contains("cost") && report["cost"].is_object()) report["cost"]["wall_time"] = 0.0;
  return report;
}

}  // namespace factcheck
