#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zonerec/porter_stemmer.hpp"
#include "zonerec/stopwords.hpp"

namespace zonerec {

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

// Whitespace-delimited words with any digit are dropped whole ("covid19",
// "Noodles4U"); the rest are lowercased and split on non-letters.
template <typename Sink>
void for_each_alpha_piece(std::string_view raw, Sink&& sink) {
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_space(raw[i])) ++i;
    const std::size_t start = i;
    bool has_digit = false;
    while (i < raw.size() && !is_space(raw[i])) has_digit |= is_digit(raw[i++]);
    if (has_digit || start == i) continue;
    std::string piece;
    for (std::size_t j = start; j <= i; ++j) {
      if (j < i && is_alpha(raw[j])) {
        piece += to_lower(raw[j]);
      } else if (!piece.empty()) {
        sink(std::move(piece));
        piece.clear();
      }
    }
  }
}

}  // namespace detail

// Raw whitespace word count; the description quality gate counts these.
inline std::size_t count_words(std::string_view raw) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : raw) {
    const bool space = detail::is_space(c);
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

// lowercase, split on non-letters, drop digit words and stopwords, stem.
// A token whose stem lands on a stopword ("wills" -> "will") is dropped too.
inline std::vector<std::string> clean_text(std::string_view raw) {
  std::vector<std::string> out;
  const PorterStemmer stem;
  detail::for_each_alpha_piece(raw, [&](std::string piece) {
    if (is_stopword(piece)) return;
    std::string s = stem(piece);
    if (s.empty() || is_stopword(s)) return;
    out.push_back(std::move(s));
  });
  return out;
}

// A category label becomes one token: cleaned words joined with '_' and the
// joined form stemmed ("Coffee Shop" -> "coffee_shop").
inline std::optional<std::string> clean_category(std::string_view label) {
  std::string joined;
  detail::for_each_alpha_piece(label, [&](std::string piece) {
    if (is_stopword(piece)) return;
    if (!joined.empty()) joined += '_';
    joined += piece;
  });
  if (joined.empty()) return std::nullopt;
  std::string s = porter_stem(joined);
  if (s.empty() || is_stopword(s)) return std::nullopt;
  return s;
}

inline std::vector<std::string> clean_categories(const std::vector<std::string>& labels) {
  std::vector<std::string> out;
  for (const auto& label : labels) {
    if (auto token = clean_category(label)) out.push_back(std::move(*token));
  }
  return out;
}

}  // namespace zonerec
