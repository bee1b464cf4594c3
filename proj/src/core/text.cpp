#include "factcheck/core/text.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

namespace factcheck::text {

Utf8Index index_utf8(std::string_view s) {
  Utf8Index idx;
  idx.code_points.reserve(s.size());
  idx.byte_offsets.reserve(s.size() + 1);
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = 0xFFFD;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      len = 0;
    }
    bool ok = len > 0 && i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (b & 0x3F);
    }
    idx.byte_offsets.push_back(i);
    if (ok) {
      idx.code_points.push_back(cp);
      i += len;
    } else {
      idx.code_points.push_back(0xFFFD);
      i += 1;
    }
  }
  idx.byte_offsets.push_back(s.size());
  return idx;
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  return n;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string substr_cp(std::string_view s, std::size_t start, std::size_t end) {
  const auto idx = index_utf8(s);
  start = std::min(start, idx.length());
  end = std::clamp(end, start, idx.length());
  const auto b = idx.byte_offsets[start];
  const auto e = idx.byte_offsets[end];
  return std::string(s.substr(b, e - b));
}

bool is_cjk(char32_t cp) {
  return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
         (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0xF900 && cp <= 0xFAFF) ||
         (cp >= 0x3040 && cp <= 0x30FF) || (cp >= 0xAC00 && cp <= 0xD7AF);
}

namespace {

bool is_word_cp(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  if (cp == 0xFFFD || is_cjk(cp)) return false;
  // General punctuation, CJK symbols/punctuation, full-width forms.
  if ((cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x3000 && cp <= 0x303F) ||
      (cp >= 0xFF00 && cp <= 0xFF65) || cp == 0x00A0 || (cp >= 0x00A1 && cp <= 0x00BF) ||
      cp == 0x00D7 || cp == 0x00F7)
    return false;
  return true;
}

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

}  // namespace

std::vector<Token> tokenize(std::string_view s) {
  const auto idx = index_utf8(s);
  std::vector<Token> out;
  const auto n = idx.length();
  auto make = [&](std::size_t b, std::size_t e) {
    Token t;
    t.start = b;
    t.end = e;
    t.surface = std::string(s.substr(idx.byte_offsets[b], idx.byte_offsets[e] - idx.byte_offsets[b]));
    t.normalized = to_lower_ascii(t.surface);
    out.push_back(std::move(t));
  };
  std::size_t i = 0;
  while (i < n) {
    const auto cp = idx.code_points[i];
    if (is_cjk(cp)) {
      make(i, i + 1);
      ++i;
    } else if (is_word_cp(cp)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (is_word_cp(idx.code_points[j]) && !is_cjk(idx.code_points[j])) {
          ++j;
        } else if (is_apostrophe(idx.code_points[j]) && j + 1 < n &&
                   is_word_cp(idx.code_points[j + 1]) && !is_cjk(idx.code_points[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      make(i, j);
      i = j;
    } else {
      ++i;
    }
  }
  for (auto& t : out) {
    // Normalize the typographic apostrophe so "doesn’t" matches "doesn't".
    std::string norm;
    for (std::size_t k = 0; k < t.normalized.size(); ++k) {
      if (t.normalized.compare(k, 3, "\xE2\x80\x99") == 0) {
        norm.push_back('\'');
        k += 2;
      } else {
        norm.push_back(t.normalized[k]);
      }
    }
    t.normalized = std::move(norm);
  }
  return out;
}

bool is_stopword(std::string_view w) {
  static const std::unordered_set<std::string_view> kStop = {
      // English function words.
      "a", "an", "the", "and", "or", "but", "nor", "so", "yet", "if", "then", "than", "as", "of",
      "at", "by", "for", "from", "in", "into", "on", "onto", "to", "with", "without", "about",
      "over", "under", "up", "down", "out", "off", "via", "per", "is", "am", "are", "was", "were",
      "be", "been", "being", "do", "does", "did", "doing", "done", "have", "has", "had",
      "having", "will", "would", "shall", "should", "can", "could", "may", "might", "must",
      "i", "me", "my", "mine", "we", "us", "our", "ours", "you", "your", "yours", "he", "him",
      "his", "she", "her", "hers", "it", "its", "they", "them", "their", "theirs", "this",
      "that", "these", "those", "there", "here", "who", "whom", "whose", "which", "what",
      "when", "where", "why", "how", "not", "no", "don't", "doesn't", "didn't", "isn't",
      "aren't", "wasn't", "weren't", "won't", "can't", "cannot", "also", "just", "very",
      "too", "all", "any", "some", "such", "own", "same", "other", "each", "both", "while",
      "whereas", "although", "though", "because", "s", "t", "it's", "she's", "he's",
      // Chinese function characters.
      "的", "了", "是", "在", "和", "与", "及", "或", "也", "都", "就", "而", "且", "之", "其",
      "这", "那", "个", "着", "过", "把", "被", "对", "于", "为", "她", "他", "它", "我", "你",
      "们", "不", "没", "有", "很", "吗", "呢", "吧", "啊"};
  return kStop.contains(w);
}

std::vector<Token> content_tokens(std::string_view s) {
  auto toks = tokenize(s);
  std::erase_if(toks, [](const Token& t) { return is_stopword(t.normalized); });
  return toks;
}

std::set<std::string> content_words(std::string_view s) {
  std::set<std::string> out;
  for (auto& t : content_tokens(s)) out.insert(t.normalized);
  return out;
}

std::string trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::size_t count_sentences(std::string_view s) {
  const auto idx = index_utf8(s);
  std::size_t n = 0;
  bool has_content = false;
  for (auto cp : idx.code_points) {
    const bool terminal = cp == '.' || cp == '!' || cp == '?' || cp == 0x3002 || cp == 0xFF01 ||
                          cp == 0xFF1F;
    if (terminal) {
      if (has_content) ++n;
      has_content = false;
    } else if (is_word_cp(cp) || is_cjk(cp)) {
      has_content = true;
    }
  }
  if (has_content) ++n;
  return n;
}

}  // namespace factcheck::text
