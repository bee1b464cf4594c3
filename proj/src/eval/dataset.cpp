#include "factcheck/eval/dataset.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "factcheck/core/error.hpp"
#include "factcheck/core/text.hpp"

namespace factcheck::eval {

using Json = nlohmann::json;

std::string_view to_string(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::factool_qa: return "factool_qa";
    case DatasetFormat::factcheck_bench: return "factcheck_bench";
    case DatasetFormat::unified: return "unified";
  }
  return "unified";
}

DatasetFormat parse_dataset_format(std::string_view s) {
  for (auto f : {DatasetFormat::factool_qa, DatasetFormat::factcheck_bench, DatasetFormat::unified})
    if (to_string(f) == s) return f;
  throw FormatError("unknown dataset format '" + std::string(s) + "'");
}

std::optional<LabelTotals> official_totals(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::factool_qa: return LabelTotals{177, 56};
    case DatasetFormat::factcheck_bench: return LabelTotals{472, 206};
    case DatasetFormat::unified: return std::nullopt;
  }
  return std::nullopt;
}

LabelTotals Dataset::totals() const {
  LabelTotals t;
  for (const auto& c : claims) (c.gold ? t.true_count : t.false_count) += 1;
  return t;
}

namespace {

bool parse_label(const Json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const auto n = v.get<long long>();
    if (n == 0 || n == 1) return n == 1;
  }
  if (v.is_string()) {
    const auto s = text::to_lower_ascii(text::trim(v.get<std::string>()));
    if (s == "true") return true;
    if (s == "false") return false;
  }
  throw FormatError(where + ": unrecognised label " + v.dump());
}

const Json* first_of(const Json& obj, std::initializer_list<const char*> keys) {
  for (auto k : keys)
    if (auto it = obj.find(k); it != obj.end() && !it->is_null()) return &*it;
  return nullptr;
}

std::optional<std::string> domain_of(const Json& obj) {
  if (auto d = first_of(obj, {"domain", "category"}); d && d->is_string()) return d->get<std::string>();
  return std::nullopt;
}

LabeledClaim claim_from(const Json& obj, const std::string& where, const std::string& dataset,
                        const std::optional<std::string>& inherited_domain) {
  if (!obj.is_object()) throw FormatError(where + ": claim record must be an object");
  const auto* t = first_of(obj, {"text", "claim"});
  if (!t || !t->is_string()) throw FormatError(where + ": claim record has no text");
  const auto* l = first_of(obj, {"label", "claim_label"});
  if (!l) throw FormatError(where + ": claim record has no label");
  LabeledClaim c;
  c.text = t->get<std::string>();
  c.gold = parse_label(*l, where);
  c.dataset = dataset;
  c.domain = domain_of(obj);
  if (!c.domain) c.domain = inherited_domain;
  return c;
}

void add_record(const Json& rec, const std::string& where, Dataset& out) {
  if (!rec.is_object()) throw FormatError(where + ": record must be a JSON object");
  if (auto it = rec.find("claims"); it != rec.end()) {
    if (!it->is_array()) throw FormatError(where + ": 'claims' must be a list");
    const auto domain = domain_of(rec);
    std::size_t k = 0;
    for (const auto& c : *it) out.claims.push_back(claim_from(c, where + " claim " + std::to_string(++k), out.name, domain));
    return;
  }
  out.claims.push_back(claim_from(rec, where, out.name, std::nullopt));
}

}  // namespace

Dataset parse_dataset(std::string_view content, DatasetFormat format, std::string name) {
  Dataset out;
  out.name = std::move(name);
  out.format = format;
  const auto body = text::trim(content);
  if (!body.empty() && body.front() == '[') {
    Json all;
    try {
      all = Json::parse(body);
    } catch (const Json::parse_error& e) {
      throw FormatError(out.name + ": " + e.what());
    }
    std::size_t i = 0;
    for (const auto& rec : all) add_record(rec, out.name + " item " + std::to_string(++i), out);
  } else {
    std::istringstream in{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (text::trim(line).empty()) continue;
      const auto where = out.name + " line " + std::to_string(lineno);
      Json rec;
      try {
        rec = Json::parse(line);
      } catch (const Json::parse_error& e) {
        throw FormatError(where + ": " + e.what());
      }
      add_record(rec, where, out);
    }
  }
  if (auto expected = official_totals(format)) {
    const auto got = out.totals();
    if (!(got == *expected))
      out.warnings.push_back("CountMismatch: " + std::string(to_string(format)) + " expects " +
                             std::to_string(expected->true_count) + " true / " + std::to_string(expected->false_count) +
                             " false, file has " + std::to_string(got.true_count) + " / " +
                             std::to_string(got.false_count));
  }
  return out;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), format, path.stem().string());
}

}  // namespace factcheck::eval
