#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace factcheck::llm {

enum class LlmTask { decompose, checkworthiness, query_gen, verify };

std::string_view to_string(LlmTask t);
LlmTask parse_task(std::string_view s);

/// Placeholders a template for `task` must contain.
const std::set<std::string>& required_placeholders(LlmTask task);

/// A prompt body with `{name}` placeholders. `{{` and `}}` render as literal
/// braces, which is how JSON examples are written inside a body. Each body
/// follows the same three-part recipe: a short task description, the
/// expected input/output format, and few-shot examples.
struct PromptTemplate {
  LlmTask task = LlmTask::decompose;
  std::string language = "en";
  std::string body;
};

/// Names of the `{name}` placeholders that occur in `body`, in first-seen order.
std::vector<std::string> placeholders(std::string_view body);

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Substitutes every placeholder verbatim. Throws MissingBinding for an
/// unbound placeholder. Bindings that match no placeholder are reported
/// through `unused` (when given) and otherwise ignored.
std::string render_prompt(const PromptTemplate& tmpl, const Bindings& bindings,
                          std::vector<std::string>* unused = nullptr);

class TemplateRegistry {
 public:
  /// Throws std::invalid_argument if the pair is already registered or the
  /// body lacks a placeholder the task requires.
  void add(PromptTemplate tmpl);

  const PromptTemplate& get(LlmTask task, std::string_view language) const;
  bool contains(LlmTask task, std::string_view language) const;

  /// True when all four tasks have a template in `language`.
  bool supports(std::string_view language) const;
  std::vector<std::string> languages() const;

  /// English and Chinese prompt sets.
  static std::shared_ptr<const TemplateRegistry> builtin();

 private:
  std::map<std::pair<LlmTask, std::string>, PromptTemplate, std::less<>> templates_;
};

/// The English decomposition prompt, exactly as shipped.
const std::string& decompose_prompt_en();

}  // namespace factcheck::llm
