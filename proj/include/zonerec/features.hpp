#pragma once

// TF-IDF features over three token groups (name, description, categories)
// sharing one group-prefixed index space. Ablation is a mask over groups.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/corpus.hpp"
#include "zonerec/error.hpp"
#include "zonerec/hash.hpp"

namespace zonerec {

struct FeatureGroupMask {
  bool use_name = true;
  bool use_description = true;
  bool use_categories = true;

  bool any() const { return use_name || use_description || use_categories; }

  void validate() const {
    if (!any()) throw ConfigError("feature group mask must enable at least one group");
  }

  static FeatureGroupMask all() { return {true, true, true}; }

  // "name,desc,cat" booleans, e.g. "1,0,1" or "true,false,true".
  static FeatureGroupMask parse(std::string_view text) {
    std::array<bool, 3> flags{};
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (i < text.size() && text[i] != ',') continue;
      if (field >= 3) throw ConfigError("mask needs exactly 3 comma-separated booleans");
      std::string_view tok = text.substr(start, i - start);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      if (tok == "1" || tok == "true" || tok == "yes" || tok == "y") {
        flags[field] = true;
      } else if (tok == "0" || tok == "false" || tok == "no" || tok == "n" || tok == "-") {
        flags[field] = false;
      } else {
        throw ConfigError("bad mask flag '" + std::string(tok) + "'");
      }
      ++field;
      start = i + 1;
    }
    if (field != 3) throw ConfigError("mask needs exactly 3 comma-separated booleans");
    FeatureGroupMask m{flags[0], flags[1], flags[2]};
    m.validate();
    return m;
  }

  std::string to_string() const {
    return std::string(use_name ? "1" : "0") + "," + (use_description ? "1" : "0") + "," +
           (use_categories ? "1" : "0");
  }

  nlohmann::json to_json() const {
    return {{"use_name", use_name},
            {"use_description", use_description},
            {"use_categories", use_categories}};
  }

  static FeatureGroupMask from_json(const nlohmann::json& j) {
    FeatureGroupMask m{j.at("use_name").get<bool>(), j.at("use_description").get<bool>(),
                       j.at("use_categories").get<bool>()};
    m.validate();
    return m;
  }

  friend bool operator==(const FeatureGroupMask&, const FeatureGroupMask&) = default;
};

// Unit-L2 (or all-zero) sparse vector with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t nnz() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  double value_at(std::size_t index) const {
    auto it = std::lower_bound(indices.begin(), indices.end(), index);
    if (it == indices.end() || *it != index) return 0.0;
    return values[static_cast<std::size_t>(it - indices.begin())];
  }

  double dot(std::span<const double> dense) const {
    double s = 0.0;
    for (std::size_t k = 0; k < indices.size(); ++k) s += values[k] * dense[indices[k]];
    return s;
  }

  double dot(const SparseVector& other) const {
    double s = 0.0;
    std::size_t a = 0, b = 0;
    while (a < indices.size() && b < other.indices.size()) {
      if (indices[a] == other.indices[b]) {
        s += values[a++] * other.values[b++];
      } else if (indices[a] < other.indices[b]) {
        ++a;
      } else {
        ++b;
      }
    }
    return s;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }

  static SparseVector from_dense(std::span<const double> dense) {
    SparseVector v;
    v.dimension = dense.size();
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (dense[i] != 0.0) {
        v.indices.push_back(static_cast<std::uint32_t>(i));
        v.values.push_back(dense[i]);
      }
    }
    return v;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

enum class IdfRetention { kHighestIdf, kLowestIdf };
enum class TermCapScope { kGlobal, kPerGroup };

struct VocabularyOptions {
  std::size_t min_df = 3;
  std::size_t max_terms = 5000;
  IdfRetention retention = IdfRetention::kHighestIdf;
  TermCapScope cap_scope = TermCapScope::kGlobal;

  nlohmann::json to_json() const {
    return {{"min_df", min_df},
            {"max_terms", max_terms},
            {"retention", retention == IdfRetention::kHighestIdf ? "highest_idf" : "lowest_idf"},
            {"cap_scope", cap_scope == TermCapScope::kGlobal ? "global" : "per_group"}};
  }

  static VocabularyOptions from_json(const nlohmann::json& j) {
    VocabularyOptions o;
    o.min_df = j.at("min_df").get<std::size_t>();
    o.max_terms = j.at("max_terms").get<std::size_t>();
    const auto r = j.at("retention").get<std::string>();
    if (r == "highest_idf") {
      o.retention = IdfRetention::kHighestIdf;
    } else if (r == "lowest_idf") {
      o.retention = IdfRetention::kLowestIdf;
    } else {
      throw ParseError("unknown idf retention '" + r + "'");
    }
    const auto c = j.at("cap_scope").get<std::string>();
    if (c == "global") {
      o.cap_scope = TermCapScope::kGlobal;
    } else if (c == "per_group") {
      o.cap_scope = TermCapScope::kPerGroup;
    } else {
      throw ParseError("unknown cap scope '" + c + "'");
    }
    return o;
  }
};

inline double smoothed_idf(std::size_t n_docs, std::size_t df) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

namespace detail {

inline constexpr std::string_view kNamePrefix = "name:";
inline constexpr std::string_view kDescriptionPrefix = "desc:";
inline constexpr std::string_view kCategoryPrefix = "cat:";

// Calls emit(term) for every unigram and adjacent bigram occurrence of the
// enabled groups, with repetition.
template <typename Emit>
void for_each_term(const CleanProfile& p, const FeatureGroupMask& mask, Emit&& emit) {
  auto group = [&](std::string_view prefix, const std::vector<std::string>& tokens) {
    std::string term;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      term.assign(prefix);
      term += tokens[i];
      emit(term);
      if (i + 1 < tokens.size()) {
        term += '_';
        term += tokens[i + 1];
        emit(term);
      }
    }
  };
  if (mask.use_name) group(kNamePrefix, p.name_tokens);
  if (mask.use_description) group(kDescriptionPrefix, p.description_tokens);
  if (mask.use_categories) group(kCategoryPrefix, p.category_tokens);
}

inline int group_of(std::string_view term) {
  if (term.starts_with(kNamePrefix)) return 0;
  if (term.starts_with(kDescriptionPrefix)) return 1;
  return 2;
}

}  // namespace detail

class Vocabulary {
 public:
  Vocabulary() = default;

  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df,
             std::vector<double> idf, std::size_t n_docs, FeatureGroupMask mask,
             VocabularyOptions options)
      : terms_(std::move(terms)),
        df_(std::move(df)),
        idf_(std::move(idf)),
        n_docs_(n_docs),
        mask_(mask),
        options_(options) {
    if (df_.size() != terms_.size() || idf_.size() != terms_.size()) {
      throw ValidationError("vocabulary arrays differ in length");
    }
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (!index_.emplace(terms_[i], i).second) {
        throw ValidationError("duplicate vocabulary term '" + terms_[i] + "'");
      }
      if (!(std::isfinite(idf_[i]) && idf_[i] > 0.0)) {
        throw ValidationError("non-positive idf for '" + terms_[i] + "'");
      }
    }
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::size_t>& df() const { return df_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t n_docs() const { return n_docs_; }
  const FeatureGroupMask& mask() const { return mask_; }
  const VocabularyOptions& options() const { return options_; }

  std::optional<std::size_t> index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  nlohmann::json to_json() const {
    return {{"format", "zonerec-vocabulary"},
            {"version", 1},
            {"n_docs", n_docs_},
            {"mask", mask_.to_json()},
            {"options", options_.to_json()},
            {"terms", terms_},
            {"df", df_},
            {"idf", idf_}};
  }

  static Vocabulary from_json(const nlohmann::json& j) {
    try {
      if (j.value("format", "") != "zonerec-vocabulary") throw ParseError("not a vocabulary document");
      if (j.value("version", 0) != 1) throw ParseError("unsupported vocabulary version");
      return Vocabulary(j.at("terms").get<std::vector<std::string>>(),
                        j.at("df").get<std::vector<std::size_t>>(),
                        j.at("idf").get<std::vector<double>>(), j.at("n_docs").get<std::size_t>(),
                        FeatureGroupMask::from_json(j.at("mask")),
                        VocabularyOptions::from_json(j.at("options")));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("vocabulary: ") + e.what());
    }
  }

  std::string hash() const { return fingerprint(to_json().dump()); }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
  std::size_t n_docs_ = 0;
  FeatureGroupMask mask_;
  VocabularyOptions options_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Unigram + bigram candidates per enabled group, DF floor, then the
// `max_terms` best by IDF (rarest first by default). Ties on IDF are broken
// by ascending term string, so the result depends only on the corpus.
inline Vocabulary fit_vocabulary(std::span<const CleanProfile> corpus, const FeatureGroupMask& mask,
                                 const VocabularyOptions& options = {}) {
  mask.validate();
  if (corpus.empty()) throw ValidationError("cannot fit a vocabulary on an empty corpus");

  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string> seen;
  for (const CleanProfile& p : corpus) {
    seen.clear();
    detail::for_each_term(p, mask, [&](const std::string& t) {
      if (seen.insert(t).second) ++df[t];
    });
  }

  std::vector<std::pair<std::string, std::size_t>> survivors;
  for (auto& [term, count] : df) {
    if (count >= options.min_df) survivors.emplace_back(term, count);
  }
  if (survivors.empty()) throw ValidationError("vocabulary_empty");

  // idf is strictly decreasing in df, so ranking on the integer df is exact.
  const bool rare_first = options.retention == IdfRetention::kHighestIdf;
  std::sort(survivors.begin(), survivors.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return rare_first ? a.second < b.second : a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::pair<std::string, std::size_t>> kept;
  if (options.cap_scope == TermCapScope::kGlobal) {
    const std::size_t n = std::min(options.max_terms, survivors.size());
    kept.assign(std::make_move_iterator(survivors.begin()),
                std::make_move_iterator(survivors.begin() + static_cast<std::ptrdiff_t>(n)));
  } else {
    std::array<std::size_t, 3> taken{};
    for (auto& s : survivors) {
      const int g = detail::group_of(s.first);
      if (taken[g] < options.max_terms) {
        ++taken[g];
        kept.push_back(std::move(s));
      }
    }
  }

  std::vector<std::string> terms;
  std::vector<std::size_t> dfs;
  std::vector<double> idfs;
  terms.reserve(kept.size());
  for (auto& [term, count] : kept) {
    idfs.push_back(smoothed_idf(corpus.size(), count));
    dfs.push_back(count);
    terms.push_back(std::move(term));
  }
  return Vocabulary(std::move(terms), std::move(dfs), std::move(idfs), corpus.size(), mask, options);
}

// count x idf over the enabled groups, L2-normalised; OOV terms are ignored
// and an all-zero result is returned as is.
inline SparseVector vectorize(const CleanProfile& profile, const Vocabulary& vocab,
                              const FeatureGroupMask& mask) {
  if (!(mask == vocab.mask())) {
    throw ConfigError("feature mask " + mask.to_string() + " does not match vocabulary mask " +
                      vocab.mask().to_string());
  }
  std::unordered_map<std::size_t, double> counts;
  detail::for_each_term(profile, mask, [&](const std::string& t) {
    if (auto idx = vocab.index_of(t)) counts[*idx] += 1.0;
  });
  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(counts.size());
  for (const auto& [idx, c] : counts) {
    entries.emplace_back(static_cast<std::uint32_t>(idx), c * vocab.idf()[idx]);
  }
  std::sort(entries.begin(), entries.end());
  double norm2 = 0.0;
  for (const auto& e : entries) norm2 += e.second * e.second;
  SparseVector v;
  v.dimension = vocab.size();
  v.indices.reserve(entries.size());
  v.values.reserve(entries.size());
  const double inv = norm2 > 0.0 ? 1.0 / std::sqrt(norm2) : 1.0;
  for (const auto& [idx, w] : entries) {
    v.indices.push_back(idx);
    v.values.push_back(w * inv);
  }
  return v;
}

inline SparseVector vectorize(const CleanProfile& profile, const Vocabulary& vocab) {
  return vectorize(profile, vocab, vocab.mask());
}

inline std::vector<SparseVector> vectorize_all(std::span<const CleanProfile> profiles,
                                               const Vocabulary& vocab) {
  std::vector<SparseVector> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(vectorize(p, vocab));
  return out;
}

}  // namespace zonerec
