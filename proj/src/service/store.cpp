#include "factcheck/service/store.hpp"

#include <algorithm>
#include <cstdio>

#include "factcheck/core/text.hpp"

namespace factcheck::service {

namespace {

std::string make_id(std::uint64_t seq) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "chk-%06llu", static_cast<unsigned long long>(seq));
  return buf;
}

std::uint64_t seq_of(const std::string& id) {
  if (id.rfind("chk-", 0) != 0) throw FormatError("malformed check id '" + id + "'");
  try {
    return std::stoull(id.substr(4));
  } catch (const std::exception&) {
    throw FormatError("malformed check id '" + id + "'");
  }
}

std::string snippet(const std::string& text) {
  const auto flat = text::trim(text);
  std::string out;
  for (char c : flat) out += (c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
  if (text::utf8_length(out) <= CheckStore::kSnippetLength) return out;
  return text::substr_cp(out, 0, CheckStore::kSnippetLength - 1) + "\xE2\x80\xA6";
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::running: return "running";
    case CheckStatus::done: return "done";
    case CheckStatus::failed: return "failed";
  }
  return "running";
}

Json to_json(const Feedback& f) {
  return Json{{"verdict_ref", f.verdict_ref}, {"rating", f.rating}, {"comment", f.comment}, {"timestamp", f.timestamp}};
}

Json to_json(const CheckRecord& r) {
  Json j{{"id", r.id},
         {"status", to_string(r.status)},
         {"text", r.submitted_text},
         {"language", r.language},
         {"submitted_at", r.submitted_at},
         {"feedback", Json::array()}};
  for (const auto& f : r.feedback) j["feedback"].push_back(to_json(f));
  if (r.report) j["report"] = *r.report;
  if (r.status == CheckStatus::failed) j["error"] = r.error;
  return j;
}

Json to_json(const HistoryEntry& h) {
  Json j{{"id", h.id}, {"snippet", h.snippet}, {"status", to_string(h.status)}, {"timestamp", h.timestamp}};
  j["credibility_percent"] = h.credibility_percent ? Json(*h.credibility_percent) : Json(nullptr);
  return j;
}

CheckStore::CheckStore(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  replay();
  log_.open(path_, std::ios::binary | std::ios::app);
  if (!log_) throw FormatError("cannot open check store " + path_.string());
  std::vector<std::string> unfinished;
  for (const auto& [id, r] : records_)
    if (r.status == CheckStatus::running) unfinished.push_back(id);
  for (const auto& id : unfinished) fail(id, "interrupted by a service restart");
}

void CheckStore::replay() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      apply(Json::parse(line));
    } catch (const std::exception& e) {
      warnings_.push_back(path_.filename().string() + " line " + std::to_string(n) + " skipped: " + e.what());
    }
  }
}

void CheckStore::apply(const Json& e) {
  const auto type = e.at("type").get<std::string>();
  const auto id = e.at("id").get<std::string>();
  if (type == "submitted") {
    const auto seq = seq_of(id);
    CheckRecord r;
    r.id = id;
    r.submitted_text = e.at("text").get<std::string>();
    r.language = e.at("language").get<std::string>();
    r.submitted_at = e.at("timestamp").get<std::string>();
    records_[id] = std::move(r);
    order_[seq] = id;
    next_seq_ = std::max(next_seq_, seq + 1);
    return;
  }
  auto& r = find(id);
  if (type == "done") {
    r.status = CheckStatus::done;
    r.report = e.at("report").get<FactReport>();
  } else if (type == "failed") {
    r.status = CheckStatus::failed;
    r.error = e.at("error").get<std::string>();
  } else if (type == "feedback") {
    const auto& f = e.at("feedback");
    r.feedback.push_back(Feedback{f.at("verdict_ref").get<std::string>(), f.at("rating").get<std::string>(),
                                  f.at("comment").get<std::string>(), f.at("timestamp").get<std::string>()});
  } else {
    throw FormatError("unknown event type '" + type + "'");
  }
}

void CheckStore::append(const Json& event) {
  apply(event);
  if (!log_.is_open()) return;
  log_ << event.dump() << '\n';
  log_.flush();
}

CheckRecord& CheckStore::find(const std::string& id) {
  auto it = records_.find(id);
  if (it == records_.end()) throw UnknownCheck(id);
  return it->second;
}

std::string CheckStore::submit(const std::string& text, const std::string& language) {
  std::lock_guard lk(mutex_);
  const auto id = make_id(next_seq_);
  append(Json{{"type", "submitted"}, {"id", id}, {"text", text}, {"language", language},
              {"timestamp", utc_timestamp_now()}});
  return id;
}

void CheckStore::complete(const std::string& id, const FactReport& report) {
  std::lock_guard lk(mutex_);
  find(id);
  append(Json{{"type", "done"}, {"id", id}, {"report", report}});
}

void CheckStore::fail(const std::string& id, const std::string& error) {
  std::lock_guard lk(mutex_);
  find(id);
  append(Json{{"type", "failed"}, {"id", id}, {"error", error}});
}

void CheckStore::add_feedback(const std::string& id, Feedback f) {
  if (f.rating != "agree" && f.rating != "disagree")
    throw FormatError("rating must be 'agree' or 'disagree', not '" + f.rating + "'");
  if (f.verdict_ref.empty()) throw FormatError("feedback needs a verdict_ref");
  std::lock_guard lk(mutex_);
  const auto& r = find(id);
  if (!r.report) throw InconsistentInput("check " + id + " has no report to give feedback on");
  if (!r.report->verdicts.contains(f.verdict_ref))
    throw FormatError("check " + id + " has no verdict for '" + f.verdict_ref + "'");
  if (f.timestamp.empty()) f.timestamp = utc_timestamp_now();
  append(Json{{"type", "feedback"}, {"id", id}, {"feedback", to_json(f)}});
}

std::optional<CheckRecord> CheckStore::get(const std::string& id) const {
  std::lock_guard lk(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<HistoryEntry> CheckStore::history() const {
  std::lock_guard lk(mutex_);
  std::vector<HistoryEntry> out;
  out.reserve(order_.size());
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    const auto& r = records_.at(it->second);
    HistoryEntry h;
    h.id = r.id;
    h.snippet = snippet(r.submitted_text);
    h.status = r.status;
    if (r.report) h.credibility_percent = r.report->credibility_percent;
    h.timestamp = r.submitted_at;
    out.push_back(std::move(h));
  }
  return out;
}

std::size_t CheckStore::size() const {
  std::lock_guard lk(mutex_);
  return records_.size();
}

std::vector<std::string> CheckStore::warnings() const {
  std::lock_guard lk(mutex_);
  return warnings_;
}

}  // namespace factcheck::service
