#pragma once

// Pinned English stopword list. Mirrors data/stopwords.txt; a unit test keeps
// the two in sync. Bump kStopwordListVersion whenever the list changes.

#include <algorithm>
#include <array>
#include <string_view>

namespace zonerec {

inline constexpr int kStopwordListVersion = 1;

inline constexpr std::array<std::string_view, 175> kStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her",
    "hers", "herself", "it", "its", "itself", "they", "them", "their", "theirs",
    "themselves", "what", "which", "who", "whom", "this", "that", "these", "those",
    "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if",
    "or", "because", "as", "until", "while", "of", "at", "by", "for", "with",
    "about", "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
    "under", "again", "further", "then", "once", "here", "there", "when", "where",
    "why", "how", "all", "any", "both", "each", "few", "more", "most", "other",
    "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too",
    "very", "s", "t", "can", "will", "just", "don", "should", "now", "d", "ll",
    "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
    "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn",
    "wasn", "weren", "won", "wouldn", "also", "could", "would", "may", "might",
    "must", "shall", "us", "yet", "upon", "among", "within", "without", "whose",
    "every", "either", "neither", "ever", "else", "onto", "per", "via",
};

inline bool is_stopword(std::string_view token) {
  static const auto sorted = [] {
    auto s = kStopwords;
    std::sort(s.begin(), s.end());
    return s;
  }();
  return std::binary_search(sorted.begin(), sorted.end(), token);
}

}  // namespace zonerec
