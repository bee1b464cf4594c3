#include "factcheck/llm/template.hpp"

#include <algorithm>
#include <stdexcept>

#include "factcheck/core/error.hpp"

namespace factcheck::llm {

std::string_view to_string(LlmTask t) {
  switch (t) {
    case LlmTask::decompose: return "decompose";
    case LlmTask::checkworthiness: return "checkworthiness";
    case LlmTask::query_gen: return "query_gen";
    case LlmTask::verify: return "verify";
  }
  return "decompose";
}

LlmTask parse_task(std::string_view s) {
  for (auto t : {LlmTask::decompose, LlmTask::checkworthiness, LlmTask::query_gen, LlmTask::verify})
    if (to_string(t) == s) return t;
  throw FormatError("unknown LLM task '" + std::string(s) + "'");
}

const std::set<std::string>& required_placeholders(LlmTask task) {
  static const std::set<std::string> kDecompose{"doc"};
  static const std::set<std::string> kCheckworthy{"claims"};
  static const std::set<std::string> kQuery{"claim"};
  static const std::set<std::string> kVerify{"claim", "evidence"};
  switch (task) {
    case LlmTask::decompose: return kDecompose;
    case LlmTask::checkworthiness: return kCheckworthy;
    case LlmTask::query_gen: return kQuery;
    case LlmTask::verify: return kVerify;
  }
  return kDecompose;
}

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Length of the `{name}` token at body[i], or 0 if there is none.
std::size_t placeholder_at(std::string_view body, std::size_t i) {
  if (body[i] != '{' || i + 1 >= body.size() || !is_ident_start(body[i + 1])) return 0;
  std::size_t j = i + 2;
  while (j < body.size() && is_ident(body[j])) ++j;
  if (j < body.size() && body[j] == '}') return j - i + 1;
  return 0;
}

}  // namespace

std::vector<std::string> placeholders(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < body.size();) {
    if (body.compare(i, 2, "{{") == 0 || body.compare(i, 2, "}}") == 0) {
      i += 2;
      continue;
    }
    if (auto len = placeholder_at(body, i)) {
      std::string name(body.substr(i + 1, len - 2));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i += len;
      continue;
    }
    ++i;
  }
  return out;
}

std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings,
                          std::vector<std::string>* unused) {
  const std::string_view body = tmpl.body;
  std::string out;
  out.reserve(body.size());
  std::set<std::string, std::less<>> used;
  for (std::size_t i = 0; i < body.size();) {
    if (body.compare(i, 2, "{{") == 0) {
      out.push_back('{');
      i += 2;
      continue;
    }
    if (body.compare(i, 2, "}}") == 0) {
      out.push_back('}');
      i += 2;
      continue;
    }
    if (auto len = placeholder_at(body, i)) {
      auto name = body.substr(i + 1, len - 2);
      auto it = bindings.find(name);
      if (it == bindings.end()) throw MissingBinding(std::string(name));
      out += it->second;
      used.emplace(name);
      i += len;
      continue;
    }
    out.push_back(body[i]);
    ++i;
  }
  if (unused) {
    for (const auto& [k, v] : bindings)
      if (!used.contains(k)) unused->push_back(k);
  }
  return out;
}

void TemplateRegistry::add(PromptTemplate tmpl) {
  auto key = std::make_pair(tmpl.task, tmpl.language);
  if (templates_.contains(key))
    throw std::invalid_argument("template already registered for " + std::string(to_string(tmpl.task)) +
                                "/" + tmpl.language);
  const auto names = placeholders(tmpl.body);
  for (const auto& req : required_placeholders(tmpl.task)) {
    if (std::find(names.begin(), names.end(), req) == names.end())
      throw std::invalid_argument("template " + std::string(to_string(tmpl.task)) + "/" +
                                  tmpl.language + " lacks placeholder {" + req + "}");
  }
  templates_.emplace(std::move(key), std::move(tmpl));
}

const PromptTemplate& TemplateRegistry::get(LlmTask task, std::string_view language) const {
  auto it = templates_.find(std::make_pair(task, std::string(language)));
  if (it == templates_.end()) throw UnsupportedLanguage(std::string(language));
  return it->second;
}

bool TemplateRegistry::contains(LlmTask task, std::string_view language) const {
  return templates_.contains(std::make_pair(task, std::string(language)));
}

bool TemplateRegistry::supports(std::string_view language) const {
  for (auto t : {LlmTask::decompose, LlmTask::checkworthiness, LlmTask::query_gen, LlmTask::verify})
    if (!contains(t, language)) return false;
  return true;
}

std::vector<std::string> TemplateRegistry::languages() const {
  std::set<std::string> langs;
  for (const auto& [key, t] : templates_) langs.insert(key.second);
  std::vector<std::string> out;
  for (const auto& l : langs)
    if (supports(l)) out.push_back(l);
  return out;
}

const std::string& decompose_prompt_en() {
  static const std::string kBody =
      "Your task is to decompose the text into atomic claims.\n"
      "The answer should be a JSON with a single key \"claims\", with the value of a list of "
      "strings, where each string should be a context-independent claim, representing one "
      "fact.\n"
      "Note that:\n"
      "1. Each claim should be concise (less than 15 words) and self-contained.\n"
      "2. Avoid vague references like 'he', 'she', 'it', 'this', 'the company', 'the man' and "
      "using complete names.\n"
      "3. Generate at least one claim for each single sentence in the texts.\n"
      "\n"
      "For example,\n"
      "Text: Mary is a five-year old girl, she likes playing piano and she doesn't like "
      "cookies.\n"
      "Output:\n"
      "{{\"claims\": [\"Mary is a five-year old girl.\", \"Mary likes playing piano.\", \"Mary "
      "doesn't like cookies.\"]}}\n"
      "\n"
      "Text: {doc}\n"
      "Output:";
  return kBody;
}

namespace {

const char* kCheckworthyEn =
    "Your task is to decide, for each claim, whether it is check-worthy: an objective, "
    "verifiable statement of fact. Claims that are vague, ambiguous, or opinion-based are not "
    "check-worthy.\n"
    "The answer should be a JSON with a single key \"results\", whose value is a list with one "
    "object per input claim, in the same order. Each object has the keys \"claim\" (the claim "
    "text), \"worthy\" (true or false) and \"reason\" (a short explanation).\n"
    "\n"
    "For example,\n"
    "Claims:\n"
    "1. MBZUAI has a vast campus.\n"
    "2. MBZUAI is located in Abu Dhabi.\n"
    "Output:\n"
    "{{\"results\": [{{\"claim\": \"MBZUAI has a vast campus.\", \"worthy\": false, \"reason\": "
    "\"'vast' is a subjective term open to interpretation.\"}}, {{\"claim\": \"MBZUAI is located "
    "in Abu Dhabi.\", \"worthy\": true, \"reason\": \"A verifiable statement about a "
    "location.\"}}]}}\n"
    "\n"
    "Claims:\n"
    "{claims}\n"
    "Output:";

const char* kQueryEn =
    "Your task is to write search engine queries that would find evidence to verify a claim.\n"
    "The answer should be a JSON with a single key \"queries\", whose value is a list of exactly "
    "three distinct keyword-style queries. Do not simply repeat the claim: a false claim used as "
    "a query can steer the search toward misleading pages.\n"
    "\n"
    "For example,\n"
    "Claim: MBZUAI is the first AI university in the world.\n"
    "Output:\n"
    "{{\"queries\": [\"MBZUAI founding year\", \"first AI university world\", \"MBZUAI "
    "university history\"]}}\n"
    "\n"
    "Claim: {claim}\n"
    "Output:";

const char* kVerifyEn =
    "Your task is to verify a claim against numbered evidence snippets retrieved from the web.\n"
    "The answer should be a JSON with the keys \"factuality\" (a number between 0 and 1, your "
    "confidence that the claim is true given the evidence), \"stances\" (a list with one object "
    "per evidence snippet, each with the keys \"evidence\" (its number), \"stance\" (one of "
    "\"supports\", \"refutes\", \"irrelevant\") and \"reasoning\"), and \"reasoning\" (a short "
    "overall justification).\n"
    "\n"
    "For example,\n"
    "Claim: The Eiffel Tower is in Paris.\n"
    "Evidence:\n"
    "[1] The Eiffel Tower is a wrought-iron lattice tower on the Champ de Mars in Paris.\n"
    "[2] Paris hosts many museums.\n"
    "Output:\n"
    "{{\"factuality\": 0.98, \"stances\": [{{\"evidence\": 1, \"stance\": \"supports\", "
    "\"reasoning\": \"States the tower is in Paris.\"}}, {{\"evidence\": 2, \"stance\": "
    "\"irrelevant\", \"reasoning\": \"Does not mention the tower.\"}}], \"reasoning\": \"Snippet 1 "
    "directly confirms the claim.\"}}\n"
    "\n"
    "Claim: {claim}\n"
    "Evidence:\n"
    "{evidence}\n"
    "Output:";

const char* kDecomposeZh =
    "你的任务是将文本分解为原子性的陈述。\n"
    "答案应为一个JSON，只有一个键 \"claims\"，其值为字符串列表，每个字符串是一个不依赖上下文、"
    "只表达一个事实的陈述。\n"
    "注意：\n"
    "1. 每个陈述应简洁（少于15个词）且自成一体。\n"
    "2. 避免使用“他”、“她”、“它”、“这”、“该公司”、“那个人”等模糊指代，应使用完整名称。\n"
    "3. 文本中的每个句子至少生成一个陈述。\n"
    "\n"
    "例如，\n"
    "文本：玛丽是一个五岁的女孩，她喜欢弹钢琴，她不喜欢饼干。\n"
    "输出：\n"
    "{{\"claims\": [\"玛丽是一个五岁的女孩。\", \"玛丽喜欢弹钢琴。\", \"玛丽不喜欢饼干。\"]}}\n"
    "\n"
    "文本：{doc}\n"
    "输出：";

const char* kCheckworthyZh =
    "你的任务是判断每个陈述是否值得核查，即是否为客观、可验证的事实陈述。模糊、含糊或基于观点的陈述"
    "不值得核查。\n"
    "答案应为一个JSON，只有一个键 \"results\"，其值为列表，按输入顺序对每个陈述给出一个对象，包含键 "
    "\"claim\"（陈述文本）、\"worthy\"（true 或 false）和 \"reason\"（简短理由）。\n"
    "\n"
    "例如，\n"
    "陈述：\n"
    "1. MBZUAI 的校园很大。\n"
    "2. MBZUAI 位于阿布扎比。\n"
    "输出：\n"
    "{{\"results\": [{{\"claim\": \"MBZUAI 的校园很大。\", \"worthy\": false, \"reason\": "
    "\"“很大”是主观描述。\"}}, {{\"claim\": \"MBZUAI 位于阿布扎比。\", \"worthy\": true, "
    "\"reason\": \"关于地点的可验证陈述。\"}}]}}\n"
    "\n"
    "陈述：\n"
    "{claims}\n"
    "输出：";

const char* kQueryZh =
    "你的任务是为一个陈述编写搜索引擎查询，以便找到核查它的证据。\n"
    "答案应为一个JSON，只有一个键 \"queries\"，其值为恰好三个互不相同的关键词式查询。不要直接复述陈述本身。\n"
    "\n"
    "例如，\n"
    "陈述：MBZUAI 是世界上第一所人工智能大学。\n"
    "输出：\n"
    "{{\"queries\": [\"MBZUAI 成立时间\", \"世界第一所人工智能大学\", \"MBZUAI 大学历史\"]}}\n"
    "\n"
    "陈述：{claim}\n"
    "输出：";

const char* kVerifyZh =
    "你的任务是根据从网络检索到的编号证据片段来核查一个陈述。\n"
    "答案应为一个JSON，包含键 \"factuality\"（0到1之间的数，表示根据证据该陈述为真的置信度）、"
    "\"stances\"（列表，每个证据片段一个对象，包含键 \"evidence\"（编号）、\"stance\"（\"supports\"、"
    "\"refutes\" 或 \"irrelevant\" 之一）和 \"reasoning\"）以及 \"reasoning\"（简短的总体理由）。\n"
    "\n"
    "例如，\n"
    "陈述：埃菲尔铁塔位于巴黎。\n"
    "证据：\n"
    "[1] 埃菲尔铁塔是位于巴黎战神广场的铁制镂空塔。\n"
    "[2] 巴黎有许多博物馆。\n"
    "输出：\n"
    "{{\"factuality\": 0.98, \"stances\": [{{\"evidence\": 1, \"stance\": \"supports\", "
    "\"reasoning\": \"直接说明铁塔位于巴黎。\"}}, {{\"evidence\": 2, \"stance\": \"irrelevant\", "
    "\"reasoning\": \"未提及铁塔。\"}}], \"reasoning\": \"证据1直接证实了该陈述。\"}}\n"
    "\n"
    "陈述：{claim}\n"
    "证据：\n"
    "{evidence}\n"
    "输出：";

}  // namespace

std::shared_ptr<const TemplateRegistry> TemplateRegistry::builtin() {
  static const auto kRegistry = [] {
    auto r = std::make_shared<TemplateRegistry>();
    r->add({LlmTask::decompose, "en", decompose_prompt_en()});
    r->add({LlmTask::checkworthiness, "en", kCheckworthyEn});
    r->add({LlmTask::query_gen, "en", kQueryEn});
    r->add({LlmTask::verify, "en", kVerifyEn});
    r->add({LlmTask::decompose, "zh", kDecomposeZh});
    r->add({LlmTask::checkworthiness, "zh", kCheckworthyZh});
    r->add({LlmTask::query_gen, "zh", kQueryZh});
    r->add({LlmTask::verify, "zh", kVerifyZh});
    return std::shared_ptr<const TemplateRegistry>(std::move(r));
  }();
  return kRegistry;
}

}  // namespace factcheck::llm
