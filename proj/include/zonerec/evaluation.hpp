#pragma once

// k-fold cross-validation of a ranker, the three-classifier comparison, and
// the six-mask feature-group ablation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/corpus.hpp"
#include "zonerec/features.hpp"
#include "zonerec/metrics.hpp"
#include "zonerec/model.hpp"
#include "zonerec/random.hpp"
#include "zonerec/ranking.hpp"
#include "zonerec/stats.hpp"

namespace zonerec {

struct FoldSplit {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  bool stratified = false;
  std::vector<std::vector<std::size_t>> test;  // ascending indices per fold

  std::vector<std::size_t> train(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < folds; ++f) {
      if (f != fold) out.insert(out.end(), test[f].begin(), test[f].end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// Stratified by zone when every zone that occurs has at least `folds`
// members, otherwise a plain shuffled split. Either way members are dealt
// round-robin, so fold sizes differ by at most one.
inline FoldSplit make_folds(std::span<const ZoneId> labels, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (labels.size() < folds) {
    throw ValidationError("corpus has " + std::to_string(labels.size()) + " profiles, fewer than " +
                          std::to_string(folds) + " folds");
  }
  FoldSplit split;
  split.folds = folds;
  split.seed = seed;
  split.test.assign(folds, {});

  const ZoneId max_zone = *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<std::size_t>> by_zone(max_zone + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) by_zone[labels[i]].push_back(i);
  split.stratified = std::all_of(by_zone.begin(), by_zone.end(), [&](const auto& members) {
    return members.empty() || members.size() >= folds;
  });

  Rng rng(seed);
  std::vector<std::size_t> dealt;
  dealt.reserve(labels.size());
  if (split.stratified) {
    for (auto& members : by_zone) {
      rng.shuffle(members);
      dealt.insert(dealt.end(), members.begin(), members.end());
    }
  } else {
    dealt.resize(labels.size());
    std::iota(dealt.begin(), dealt.end(), std::size_t{0});
    rng.shuffle(dealt);
  }
  for (std::size_t pos = 0; pos < dealt.size(); ++pos) split.test[pos % folds].push_back(dealt[pos]);
  for (auto& t : split.test) std::sort(t.begin(), t.end());
  return split;
}

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t k = kDefaultTopK;
  VocabularyOptions vocabulary;
  // Sanity mode: score the training split instead of the held-out one.
  bool evaluate_on_train = false;

  nlohmann::json to_json() const {
    return {{"folds", folds},
            {"seed", seed},
            {"k", k},
            {"vocabulary", vocabulary.to_json()},
            {"evaluate_on_train", evaluate_on_train}};
  }
};

struct FoldMetrics {
  double hit = 0.0;
  double map = 0.0;
  double ndcg = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t vocabulary_size = 0;
  std::size_t vocabulary_docs = 0;
};

struct MetricsReport {
  std::string label;
  ModelConfig model;
  FeatureGroupMask mask;
  CvOptions options;
  bool stratified = false;
  std::vector<FoldMetrics> folds;
  double mean_hit = 0.0;
  double mean_map = 0.0;
  double mean_ndcg = 0.0;

  std::vector<double> per_fold(double FoldMetrics::*field) const {
    std::vector<double> out;
    for (const auto& f : folds) out.push_back(f.*field);
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json fj = nlohmann::json::array();
    for (const auto& f : folds) {
      fj.push_back({{"hit", f.hit},
                    {"map", f.map},
                    {"ndcg", f.ndcg},
                    {"train_size", f.train_size},
                    {"test_size", f.test_size},
                    {"vocabulary_size", f.vocabulary_size},
                    {"vocabulary_docs", f.vocabulary_docs}});
    }
    const std::string k = std::to_string(options.k);
    return {{"label", label},
            {"model", model.to_json()},
            {"mask", mask.to_json()},
            {"cv", options.to_json()},
            {"stratified", stratified},
            {"folds", fj},
            {"mean", {{"hit@" + k, mean_hit}, {"map@" + k, mean_map}, {"ndcg@" + k, mean_ndcg}}}};
  }
};

// Called after each fold with (fold index, fold count); optional.
using FoldProgress = std::function<void(std::size_t, std::size_t)>;

inline MetricsReport cross_validate(std::span<const CleanProfile> corpus, std::size_t zone_count,
                                    const ModelConfig& model_config, const FeatureGroupMask& mask,
                                    const CvOptions& options = {}, const FoldProgress& progress = {}) {
  model_config.validate();
  mask.validate();
  if (options.k < 1) throw ConfigError("k must be >= 1");
  if (zone_count < 2) throw ValidationError("cross-validation needs at least two zones");

  std::vector<ZoneId> labels;
  labels.reserve(corpus.size());
  for (const auto& p : corpus) {
    if (p.zone_id >= zone_count) throw ValidationError("profile '" + p.id + "' has an out-of-range zone");
    labels.push_back(p.zone_id);
  }
  const FoldSplit split = make_folds(labels, options.folds, options.seed);

  MetricsReport report;
  report.label = model_config.label();
  report.model = model_config;
  report.mask = mask;
  report.options = options;
  report.stratified = split.stratified;

  for (std::size_t fold = 0; fold < split.folds; ++fold) {
    const std::vector<std::size_t> train_idx = split.train(fold);
    const std::vector<std::size_t>& test_idx = options.evaluate_on_train ? train_idx : split.test[fold];

    std::vector<CleanProfile> train_docs;
    train_docs.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_docs.push_back(corpus[i]);
    const Vocabulary vocab = fit_vocabulary(train_docs, mask, options.vocabulary);
    if (vocab.n_docs() != train_docs.size()) {
      throw ValidationError("vocabulary was fitted on documents outside the training split");
    }

    const std::vector<SparseVector> train_x = vectorize_all(train_docs, vocab);
    std::vector<ZoneId> train_y;
    train_y.reserve(train_idx.size());
    for (std::size_t i : train_idx) train_y.push_back(labels[i]);
    const LabeledData data{train_x, train_y, zone_count, vocab.size()};
    const RankerModel model = train_model(model_config, data);

    FoldMetrics fm;
    fm.train_size = train_idx.size();
    fm.test_size = test_idx.size();
    fm.vocabulary_size = vocab.size();
    fm.vocabulary_docs = vocab.n_docs();
    for (std::size_t i : test_idx) {
      const SparseVector x = vectorize(corpus[i], vocab);
      const Recommendation rec = recommend(score(model, x), zone_count);
      const RankMetrics m = rank_metrics(rec, labels[i], options.k);
      fm.hit += m.hit;
      fm.map += m.map;
      fm.ndcg += m.ndcg;
    }
    const auto denom = static_cast<double>(std::max<std::size_t>(1, test_idx.size()));
    fm.hit /= denom;
    fm.map /= denom;
    fm.ndcg /= denom;
    report.folds.push_back(fm);
    if (progress) progress(fold, split.folds);
  }

  for (const auto& f : report.folds) {
    report.mean_hit += f.hit;
    report.mean_map += f.map;
    report.mean_ndcg += f.ndcg;
  }
  const auto nf = static_cast<double>(report.folds.size());
  report.mean_hit /= nf;
  report.mean_map /= nf;
  report.mean_ndcg /= nf;
  return report;
}

// Fits vocabulary and model on the whole corpus for serving.
inline ModelBundle train_bundle(std::span<const CleanProfile> corpus, std::size_t zone_count,
                                const ModelConfig& model_config, const FeatureGroupMask& mask,
                                const VocabularyOptions& vocabulary_options = {},
                                nlohmann::json metadata = nlohmann::json::object()) {
  model_config.validate();
  mask.validate();
  std::vector<ZoneId> labels;
  labels.reserve(corpus.size());
  for (const auto& p : corpus) {
    if (p.zone_id >= zone_count) throw ValidationError("profile '" + p.id + "' has an out-of-range zone");
    labels.push_back(p.zone_id);
  }
  ModelBundle b;
  b.vocabulary = fit_vocabulary(corpus, mask, vocabulary_options);
  const std::vector<SparseVector> x = vectorize_all(corpus, b.vocabulary);
  b.model = train_model(model_config, LabeledData{x, labels, zone_count, b.vocabulary.size()});
  b.config = model_config;
  b.zone_count = zone_count;
  b.metadata = std::move(metadata);
  return b;
}

// Paired tests of `a` against `b` on each metric, fold by fold.
struct MetricTTests {
  TTestResult hit;
  TTestResult map;
  TTestResult ndcg;
};

inline MetricTTests compare_reports(const MetricsReport& a, const MetricsReport& b) {
  auto run = [&](double FoldMetrics::*field) {
    const auto x = a.per_fold(field);
    const auto y = b.per_fold(field);
    return paired_t_test(x, y);
  };
  return {run(&FoldMetrics::hit), run(&FoldMetrics::map), run(&FoldMetrics::ndcg)};
}

inline nlohmann::json to_json(const TTestResult& t) {
  nlohmann::json j = {{"p_value", t.p_value}, {"dof", t.dof}, {"degenerate_variance", t.degenerate_variance}};
  j["t"] = std::isfinite(t.t) ? nlohmann::json(t.t) : nlohmann::json(t.t > 0 ? "+inf" : "-inf");
  return j;
}

inline nlohmann::json to_json(const MetricTTests& t) {
  return {{"hit", to_json(t.hit)}, {"map", to_json(t.map)}, {"ndcg", to_json(t.ndcg)}};
}

// A model's report next to the chance-level baseline on the same folds.
struct EvaluationReport {
  MetricsReport model;
  MetricsReport baseline;
  MetricTTests versus_baseline;

  nlohmann::json to_json() const {
    return {{"format", "zonerec-evaluation"},
            {"version", 1},
            {"model", model.to_json()},
            {"baseline", baseline.to_json()},
            {"versus_baseline", zonerec::to_json(versus_baseline)}};
  }
};

inline EvaluationReport evaluate(std::span<const CleanProfile> corpus, std::size_t zone_count,
                                 const ModelConfig& model_config, const FeatureGroupMask& mask,
                                 const CvOptions& options = {}, const FoldProgress& progress = {}) {
  EvaluationReport r;
  r.model = cross_validate(corpus, zone_count, model_config, mask, options, progress);
  ModelConfig baseline;
  baseline.kind = ModelKind::kRandomBaseline;
  baseline.seed = model_config.seed;
  r.baseline = cross_validate(corpus, zone_count, baseline, mask, options);
  r.versus_baseline = compare_reports(r.model, r.baseline);
  return r;
}

struct ComparisonReport {
  std::vector<MetricsReport> rows;
  struct PairTest {
    std::size_t a = 0;
    std::size_t b = 0;
    MetricTTests tests;
  };
  std::vector<PairTest> pairs;

  nlohmann::json to_json() const {
    nlohmann::json rj = nlohmann::json::array();
    for (const auto& r : rows) rj.push_back(r.to_json());
    nlohmann::json pj = nlohmann::json::array();
    for (const auto& p : pairs) {
      pj.push_back({{"a", rows[p.a].label}, {"b", rows[p.b].label}, {"tests", zonerec::to_json(p.tests)}});
    }
    return {{"format", "zonerec-comparison"}, {"version", 1}, {"rows", rj}, {"paired_t_tests", pj}};
  }
};

// Default rows: SVM-Linear (C=1), SVM-RBF (C=1, gamma=1/#features), random
// forest with the given tree count.
inline std::vector<ModelConfig> default_comparison_configs(std::size_t trees, std::uint64_t seed) {
  ModelConfig linear;
  linear.kind = ModelKind::kLinearSvm;
  linear.seed = seed;
  ModelConfig rbf;
  rbf.kind = ModelKind::kRbfSvm;
  rbf.seed = seed;
  ModelConfig rf;
  rf.kind = ModelKind::kRandomForest;
  rf.trees = trees;
  rf.seed = seed;
  return {linear, rbf, rf};
}

inline ComparisonReport compare_models(std::span<const CleanProfile> corpus, std::size_t zone_count,
                                       std::span<const ModelConfig> configs, const FeatureGroupMask& mask,
                                       const CvOptions& options = {}) {
  ComparisonReport r;
  for (const auto& cfg : configs) r.rows.push_back(cross_validate(corpus, zone_count, cfg, mask, options));
  for (std::size_t a = 0; a < r.rows.size(); ++a) {
    for (std::size_t b = a + 1; b < r.rows.size(); ++b) {
      r.pairs.push_back({a, b, compare_reports(r.rows[a], r.rows[b])});
    }
  }
  return r;
}

// Single-group rows first, then two-group rows.
inline const std::array<FeatureGroupMask, 6>& ablation_masks() {
  static const std::array<FeatureGroupMask, 6> masks = {{
      {false, false, true},
      {false, true, false},
      {true, false, false},
      {true, false, true},
      {true, true, false},
      {false, true, true},
  }};
  return masks;
}

struct AblationReport {
  std::vector<MetricsReport> rows;  // in ablation_masks() order

  nlohmann::json to_json() const {
    nlohmann::json rj = nlohmann::json::array();
    for (const auto& r : rows) rj.push_back(r.to_json());
    return {{"format", "zonerec-ablation"}, {"version", 1}, {"rows", rj}};
  }
};

// The vocabulary is refitted for every mask, so each row gets the full term
// budget for its groups.
inline AblationReport ablation(std::span<const CleanProfile> corpus, std::size_t zone_count,
                               const ModelConfig& model_config, const CvOptions& options = {}) {
  model_config.validate();
  AblationReport r;
  for (const auto& mask : ablation_masks()) {
    r.rows.push_back(cross_validate(corpus, zone_count, model_config, mask, options));
  }
  return r;
}

}  // namespace zonerec
