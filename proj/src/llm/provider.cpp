#include "factcheck/llm/provider.hpp"

#include <stdexcept>

namespace factcheck::llm {

std::uint64_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

void ProviderConfig::validate() const {
  if (max_requests < 1) throw std::invalid_argument("provider '" + name + "': max_requests must be >= 1");
  if (!(window > 0.0)) throw std::invalid_argument("provider '" + name + "': window must be > 0");
  if (!(timeout > 0.0)) throw std::invalid_argument("provider '" + name + "': timeout must be > 0");
}

}  // namespace factcheck::llm
