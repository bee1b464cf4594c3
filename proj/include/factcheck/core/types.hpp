#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factcheck {

struct Document {
  std::string id;
  std::string text;
  std::string language = "en";

  bool operator==(const Document&) const = default;
};

/// Half-open range [start, end) of Unicode code points into Document::text.
struct ClaimSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const ClaimSpan&) const = default;
};

enum class Checkworthiness { worthy, unworthy, undetermined };

struct Claim {
  std::string id;
  std::string document_id;
  std::string text;
  std::vector<ClaimSpan> spans;
  Checkworthiness checkworthy = Checkworthiness::undetermined;
  std::optional<std::string> unworthy_reason;

  bool operator==(const Claim&) const = default;
};

struct SearchQuery {
  std::string claim_id;
  std::string text;

  bool operator==(const SearchQuery&) const = default;
};

enum class Stance { supports, refutes, irrelevant };

struct EvidenceItem {
  std::string claim_id;
  std::string url;
  std::string source_title;
  std::string snippet;
  Stance stance = Stance::irrelevant;
  double relevance = 0.0;
  std::string reasoning;
  bool is_direct_answer = false;

  bool operator==(const EvidenceItem&) const = default;
};

enum class Label { well_supported, refuted, controversial, conflicting, unverifiable };

inline constexpr std::array<Label, 5> kAllLabels = {Label::well_supported, Label::refuted,
                                                   Label::controversial, Label::conflicting,
                                                   Label::unverifiable};

struct ClaimVerdict {
  std::string claim_id;
  double factuality = 0.5;
  Label label = Label::unverifiable;
  std::vector<EvidenceItem> evidence;

  bool operator==(const ClaimVerdict&) const = default;
};

/// Tally indexed by Label.
struct LabelCounts {
  std::array<std::size_t, kAllLabels.size()> values{};

  std::size_t& operator[](Label l) { return values[static_cast<std::size_t>(l)]; }
  std::size_t operator[](Label l) const { return values[static_cast<std::size_t>(l)]; }
  std::size_t total() const {
    std::size_t n = 0;
    for (auto v : values) n += v;
    return n;
  }
  bool operator==(const LabelCounts&) const = default;
};

struct CostRecord {
  std::uint64_t web_queries = 0;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  double wall_time = 0.0;  // seconds
  bool tokens_estimated = false;

  bool operator==(const CostRecord&) const = default;
};

struct FactReport {
  Document document;
  std::vector<Claim> claims;
  std::map<std::string, ClaimVerdict> verdicts;
  std::optional<double> credibility_percent;
  LabelCounts counts;
  CostRecord cost;
  std::string created_at;  // ISO-8601 UTC
  std::vector<std::string> warnings;

  bool operator==(const FactReport&) const = default;
};

std::string_view to_string(Checkworthiness c);
std::string_view to_string(Stance s);
std::string_view to_string(Label l);

Checkworthiness parse_checkworthiness(std::string_view s);
Stance parse_stance(std::string_view s);
Label parse_label(std::string_view s);

/// Stable identifier derived from the text (FNV-1a, hex).
std::string document_id_for(std::string_view text);

/// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp_now();

}  // namespace factcheck
