#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "factcheck/core/error.hpp"
#include "factcheck/core/json.hpp"
#include "factcheck/core/types.hpp"

namespace factcheck::service {

class UnknownCheck : public Error {
 public:
  explicit UnknownCheck(const std::string& id) : Error("no check with id '" + id + "'") {}
};

enum class CheckStatus { running, done, failed };
std::string_view to_string(CheckStatus s);

struct Feedback {
  std::string verdict_ref;  // claim id of the verdict being rated
  std::string rating;       // agree | disagree
  std::string comment;
  std::string timestamp;
};

struct CheckRecord {
  std::string id;
  std::string submitted_text;
  std::string language = "en";
  std::string submitted_at;
  CheckStatus status = CheckStatus::running;
  std::optional<FactReport> report;  // done only
  std::string error;                 // failed only
  std::vector<Feedback> feedback;    // submission order
};

struct HistoryEntry {
  std::string id;
  std::string snippet;
  CheckStatus status = CheckStatus::running;
  std::optional<double> credibility_percent;
  std::string timestamp;
};

Json to_json(const Feedback& f);
Json to_json(const CheckRecord& r);
Json to_json(const HistoryEntry& h);

/// Check history kept in memory and mirrored to an append-only JSONL log.
///
/// Each line is one event: submitted, done, failed or feedback. Opening a
/// store replays the log; checks that never finished are marked failed
/// (and that is logged too). A torn last line is skipped with a warning.
/// An empty path keeps everything in memory.
class CheckStore {
 public:
  explicit CheckStore(std::filesystem::path path = {});

  std::string submit(const std::string& text, const std::string& language);
  void complete(const std::string& id, const FactReport& report);
  void fail(const std::string& id, const std::string& error);

  /// Throws UnknownCheck, FormatError (bad rating, empty or unknown
  /// verdict_ref), or InconsistentInput when the check has no report.
  void add_feedback(const std::string& id, Feedback feedback);

  std::optional<CheckRecord> get(const std::string& id) const;
  /// Newest submission first.
  std::vector<HistoryEntry> history() const;
  std::size_t size() const;
  std::vector<std::string> warnings() const;

  static constexpr std::size_t kSnippetLength = 80;

 private:
  void replay();
  void apply(const Json& event);
  void append(const Json& event);
  CheckRecord& find(const std::string& id);

  std::filesystem::path path_;
  std::ofstream log_;
  mutable std::mutex mutex_;
  std::map<std::string, CheckRecord> records_;
  std::map<std::uint64_t, std::string> order_;  // sequence -> id
  std::uint64_t next_seq_ = 1;
  std::vector<std::string> warnings_;
};

}  // namespace factcheck::service
