#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace factcheck::text {

/// Decoded code points with the byte offset where each begins. A trailing
/// sentinel offset equal to the input size is appended, so
/// `byte_offsets.size() == code_points.size() + 1`.
struct Utf8Index {
  std::vector<char32_t> code_points;
  std::vector<std::size_t> byte_offsets;

  std::size_t length() const { return code_points.size(); }
};

/// Invalid bytes decode as U+FFFD, one per byte.
Utf8Index index_utf8(std::string_view s);
std::size_t utf8_length(std::string_view s);
std::string encode_utf8(char32_t cp);

/// Substring by code-point range [start, end).
std::string substr_cp(std::string_view s, std::size_t start, std::size_t end);

bool is_cjk(char32_t cp);

struct Token {
  std::string surface;     // as written
  std::string normalized;  // ASCII-lowercased
  std::size_t start = 0;   // code points, inclusive
  std::size_t end = 0;     // code points, exclusive
};

/// Words are runs of letters, digits, and in-word apostrophes; every CJK
/// ideograph is its own token. Hyphens and other punctuation separate words.
std::vector<Token> tokenize(std::string_view s);

bool is_stopword(std::string_view normalized);

/// Tokens minus stop words, in order, duplicates kept.
std::vector<Token> content_tokens(std::string_view s);

std::set<std::string> content_words(std::string_view s);

std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Sentences as terminated by . ! ? and their CJK full-width forms.
std::size_t count_sentences(std::string_view s);

}  // namespace factcheck::text
