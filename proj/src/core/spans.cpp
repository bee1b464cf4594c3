#include "factcheck/core/spans.hpp"

#include <set>

#include "factcheck/core/text.hpp"

namespace factcheck {

namespace {

struct Clause {
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<std::string> words;  // content words
};

bool is_clause_break(char32_t cp) {
  switch (cp) {
    case ',': case ';': case ':': case '.': case '!': case '?': case '\n':
    case '(': case ')': case '"':
    case 0x3001: case 0x3002: case 0xFF0C: case 0xFF1B: case 0xFF1A: case 0xFF01: case 0xFF1F:
    case 0x201C: case 0x201D: case 0x2014:
      return true;
    default:
      return false;
  }
}

bool is_conjunction(std::string_view w) {
  return w == "and" || w == "but" || w == "or" || w == "while" || w == "whereas" ||
         w == "although" || w == "though" || w == "because" || w == "而" || w == "但" ||
         w == "并";
}

std::vector<Clause> split_clauses(std::string_view doc) {
  const auto idx = text::index_utf8(doc);
  const auto tokens = text::tokenize(doc);
  std::vector<Clause> clauses;
  Clause cur;
  bool open = false;
  std::size_t prev_end = 0;
  auto close = [&] {
    if (open) clauses.push_back(std::move(cur));
    cur = Clause{};
    open = false;
  };
  for (const auto& tok : tokens) {
    for (std::size_t k = prev_end; k < tok.start; ++k) {
      if (is_clause_break(idx.code_points[k])) {
        close();
        break;
      }
    }
    prev_end = tok.end;
    if (is_conjunction(tok.normalized)) {
      close();
      continue;
    }
    if (!open) {
      cur.start = tok.start;
      open = true;
    }
    cur.end = tok.end;
    if (!text::is_stopword(tok.normalized)) cur.words.push_back(tok.normalized);
  }
  close();
  return clauses;
}

}  // namespace

std::vector<ClaimSpan> map_claim_to_spans(const Document& document, std::string_view claim,
                                          const SpanMatchOptions& options) {
  const auto needle = text::trim(claim);
  if (needle.empty() || document.text.empty()) return {};

  if (auto pos = document.text.find(needle); pos != std::string::npos) {
    const auto start = text::utf8_length(std::string_view(document.text).substr(0, pos));
    return {ClaimSpan{start, start + text::utf8_length(needle)}};
  }

  const auto claim_words = text::content_words(needle);
  if (claim_words.empty()) return {};
  const double claim_size = static_cast<double>(claim_words.size());

  const auto clauses = split_clauses(document.text);
  bool found = false;
  double best_score = -1.0;
  ClaimSpan best;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    std::set<std::string> window;
    std::size_t shared = 0;
    for (std::size_t j = i; j < clauses.size(); ++j) {
      for (const auto& w : clauses[j].words) {
        if (window.insert(w).second && claim_words.contains(w)) ++shared;
      }
      if (static_cast<double>(shared) / claim_size + 1e-12 < options.min_coverage) continue;
      const double uni = claim_size + static_cast<double>(window.size()) - static_cast<double>(shared);
      const double score = static_cast<double>(shared) / uni;
      const ClaimSpan span{clauses[i].start, clauses[j].end};
      const auto len = span.end - span.start;
      const bool better =
          !found || score > best_score + 1e-12 ||
          (score > best_score - 1e-12 &&
           (len < best.end - best.start || (len == best.end - best.start && span.start < best.start)));
      if (better) {
        found = true;
        best_score = score;
        best = span;
      }
    }
  }
  if (!found) return {};
  return {best};
}

std::vector<std::vector<ClaimSpan>> map_claims_to_spans(const Document& document,
                                                        const std::vector<std::string>& claims,
                                                        const SpanMatchOptions& options) {
  std::vector<std::vector<ClaimSpan>> out;
  out.reserve(claims.size());
  for (const auto& c : claims) out.push_back(map_claim_to_spans(document, c, options));
  return out;
}

}  // namespace factcheck
