#pragma once

// Porter (1980) suffix-stripping stemmer, original rule set: no irregular
// forms table, ABLI -> ABLE in step 2, and short words are stemmed too.
// Input is expected to be lowercase.

#include <cstddef>
#include <string>
#include <string_view>

namespace zonerec {

class PorterStemmer {
 public:
  std::string operator()(std::string_view word) const {
    std::string w(word);
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5a(w);
    step5b(w);
    return w;
  }

 private:
  static bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
  }

  // 'y' is a consonant at the start of a word or after a vowel.
  static bool is_consonant(std::string_view w, std::size_t i) {
    if (is_vowel_letter(w[i])) return false;
    if (w[i] != 'y') return true;
    return i == 0 || !is_consonant(w, i - 1);
  }

  // m in [C](VC)^m[V].
  static int measure(std::string_view stem) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) {
      const bool cons = is_consonant(stem, i);
      if (cons && prev_vowel) ++m;
      prev_vowel = !cons;
    }
    return m;
  }

  static bool contains_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i) {
      if (!is_consonant(stem, i)) return true;
    }
    return false;
  }

  static bool ends_double_consonant(std::string_view w) {
    const std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
  }

  // *o: ends consonant-vowel-consonant, last consonant not w, x or y.
  static bool ends_cvc(std::string_view w) {
    const std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) {
      return false;
    }
    const char last = w[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
  }

  static bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
  }

  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    int min_measure;  // condition is measure(stem) > min_measure
  };

  // The first rule whose suffix matches decides; if its condition fails the
  // word is left alone and later rules are not tried.
  template <std::size_t N>
  static void apply_first(std::string& w, const Rule (&rules)[N]) {
    for (const Rule& r : rules) {
      if (!ends_with(w, r.suffix)) continue;
      const std::string_view stem = std::string_view(w).substr(0, w.size() - r.suffix.size());
      if (measure(stem) > r.min_measure) {
        w.resize(stem.size());
        w += r.replacement;
      }
      return;
    }
  }

  static void step1a(std::string& w) {
    if (ends_with(w, "sses")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
      w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
      // unchanged
    } else if (ends_with(w, "s")) {
      w.pop_back();
    }
  }

  static void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
      if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
      return;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed") && contains_vowel(std::string_view(w).substr(0, w.size() - 2))) {
      cut = 2;
    } else if (ends_with(w, "ing") &&
               contains_vowel(std::string_view(w).substr(0, w.size() - 3))) {
      cut = 3;
    }
    if (cut == 0) return;
    w.resize(w.size() - cut);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
      w += 'e';
    } else if (ends_double_consonant(w)) {
      const char last = w.back();
      if (last != 'l' && last != 's' && last != 'z') w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
      w += 'e';
    }
  }

  static void step1c(std::string& w) {
    if (ends_with(w, "y") && contains_vowel(std::string_view(w).substr(0, w.size() - 1))) {
      w.back() = 'i';
    }
  }

  static void step2(std::string& w) {
    static constexpr Rule rules[] = {
        {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
        {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
        {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
        {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
        {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
        {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
        {"iviti", "ive", 0},   {"biliti", "ble", 0},
    };
    apply_first(w, rules);
  }

  static void step3(std::string& w) {
    static constexpr Rule rules[] = {
        {"icate", "ic", 0}, {"ative", "", 0}, {"alize", "al", 0}, {"iciti", "ic", 0},
        {"ical", "ic", 0},  {"ful", "", 0},   {"ness", "", 0},
    };
    apply_first(w, rules);
  }

  static void step4(std::string& w) {
    static constexpr std::string_view suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent", "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize",
    };
    for (std::string_view s : suffixes) {
      if (!ends_with(w, s)) continue;
      const std::string_view stem = std::string_view(w).substr(0, w.size() - s.size());
      bool ok = measure(stem) > 1;
      if (ok && s == "ion") ok = !stem.empty() && (stem.back() == 's' || stem.back() == 't');
      if (ok) w.resize(stem.size());
      return;
    }
  }

  static void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    const std::string_view stem = std::string_view(w).substr(0, w.size() - 1);
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
  }

  static void step5b(std::string& w) {
    if (ends_with(w, "ll") && measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
      w.pop_back();
    }
  }
};

inline std::string porter_stem(std::string_view word) { return PorterStemmer{}(word); }

}  // namespace zonerec
