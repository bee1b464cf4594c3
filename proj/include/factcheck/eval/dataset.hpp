#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factcheck::eval {

struct LabeledClaim {
  std::string text;
  bool gold = false;
  std::string dataset;
  std::optional<std::string> domain;
};

enum class DatasetFormat { factool_qa, factcheck_bench, unified };

std::string_view to_string(DatasetFormat f);
DatasetFormat parse_dataset_format(std::string_view s);

struct LabelTotals {
  std::size_t true_count = 0;
  std::size_t false_count = 0;
  std::size_t total() const { return true_count + false_count; }
  bool operator==(const LabelTotals&) const = default;
};

/// Published label split of the public benchmark files; none for `unified`.
std::optional<LabelTotals> official_totals(DatasetFormat f);

struct Dataset {
  std::string name;
  DatasetFormat format = DatasetFormat::unified;
  std::vector<LabeledClaim> claims;
  /// "CountMismatch: ..." when a benchmark file's split differs from the
  /// published one.
  std::vector<std::string> warnings;

  LabelTotals totals() const;
};

/// Reads a dataset file (JSON lines, or one JSON array).
///
/// Records may be response-level, `{"prompt", "response", "claims": [{"claim",
/// "label"}, ...], "category"|"domain"}`, or claim-level, `{"claim"|"text",
/// "label"|"claim_label", "domain"}`. Labels are booleans, 0/1, or the
/// strings true/false (any case). Throws FormatError naming the line.
Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
Dataset parse_dataset(std::string_view content, DatasetFormat format, std::string name);

}  // namespace factcheck::eval
