#pragma once

// Ranker models behind one interface: train from a config, score a vector
// into per-zone matching scores, and round-trip through JSON.

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/dataset.hpp"
#include "zonerec/features.hpp"
#include "zonerec/hash.hpp"
#include "zonerec/linear_svm.hpp"
#include "zonerec/random_forest.hpp"
#include "zonerec/rbf_svm.hpp"

namespace zonerec {

enum class ModelKind { kLinearSvm, kRbfSvm, kRandomForest, kRandomBaseline };

inline std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::kLinearSvm: return "svm-linear";
    case ModelKind::kRbfSvm: return "svm-rbf";
    case ModelKind::kRandomForest: return "rf";
    case ModelKind::kRandomBaseline: return "random";
  }
  return "unknown";
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "svm-linear") return ModelKind::kLinearSvm;
  if (s == "svm-rbf") return ModelKind::kRbfSvm;
  if (s == "rf") return ModelKind::kRandomForest;
  if (s == "random") return ModelKind::kRandomBaseline;
  throw ConfigError("unknown algorithm '" + s + "' (expected svm-linear, svm-rbf, rf or random)");
}

struct ModelConfig {
  ModelKind kind = ModelKind::kRandomForest;
  double c = 1.0;
  double gamma = 0.0;  // <= 0: 1 / #features
  std::size_t trees = 100;
  std::size_t epochs = 15;
  double tol = 1e-3;
  std::size_t max_iterations = 0;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be > 0");
    if (gamma < 0.0 || !std::isfinite(gamma)) throw ConfigError("gamma must be > 0 (or 0 for 1/#features)");
    if (trees < 1) throw ConfigError("trees must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  }

  // Row label in comparison tables.
  std::string label() const {
    auto num = [](double v) {
      std::string s = nlohmann::json(v).dump();
      if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
      return s;
    };
    switch (kind) {
      case ModelKind::kLinearSvm: return "SVM-Linear (C=" + num(c) + ")";
      case ModelKind::kRbfSvm:
        return "SVM-RBF (C=" + num(c) + ", gamma=" + (gamma > 0.0 ? num(gamma) : "1/#features") + ")";
      case ModelKind::kRandomForest: return "Random forest (#trees=" + std::to_string(trees) + ")";
      case ModelKind::kRandomBaseline: return "Random baseline";
    }
    return "unknown";
  }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"kind", to_string(kind)}, {"seed", seed}};
    switch (kind) {
      case ModelKind::kLinearSvm:
        j["c"] = c;
        j["epochs"] = epochs;
        break;
      case ModelKind::kRbfSvm:
        j["c"] = c;
        j["gamma"] = gamma;
        j["tol"] = tol;
        j["max_iterations"] = max_iterations;
        break;
      case ModelKind::kRandomForest:
        j["trees"] = trees;
        break;
      case ModelKind::kRandomBaseline:
        break;
    }
    return j;
  }

  static ModelConfig from_json(const nlohmann::json& j) {
    ModelConfig m;
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.seed = j.value("seed", std::uint64_t{1});
    m.c = j.value("c", 1.0);
    m.gamma = j.value("gamma", 0.0);
    m.trees = j.value("trees", std::size_t{100});
    m.epochs = j.value("epochs", std::size_t{15});
    m.tol = j.value("tol", 1e-3);
    m.max_iterations = j.value("max_iterations", std::size_t{0});
    m.validate();
    return m;
  }
};

// Uniformly random scores, seeded by the input's content so that scoring stays
// a pure function. Used as the chance-level reference in evaluation.
struct RandomBaselineModel {
  std::size_t dimension = 0;
  std::size_t n_classes = 0;
  std::uint64_t seed = 1;

  std::vector<double> score(const SparseVector& x) const {
    check_dimension(x, dimension);
    std::uint64_t h = seed;
    for (std::size_t k = 0; k < x.nnz(); ++k) {
      h = mix_seed(h, x.indices[k]);
      h = mix_seed(h, std::bit_cast<std::uint64_t>(x.values[k]));
    }
    Rng rng(h);
    std::vector<double> s(n_classes);
    for (double& v : s) v = rng.uniform();
    return s;
  }
};

using RankerModel = std::variant<LinearSvmModel, RbfSvmModel, RandomForestModel, RandomBaselineModel>;

inline ModelKind kind_of(const RankerModel& m) {
  switch (m.index()) {
    case 0: return ModelKind::kLinearSvm;
    case 1: return ModelKind::kRbfSvm;
    case 2: return ModelKind::kRandomForest;
    default: return ModelKind::kRandomBaseline;
  }
}

inline std::size_t dimension_of(const RankerModel& m) {
  return std::visit([](const auto& v) { return v.dimension; }, m);
}

inline std::size_t class_count_of(const RankerModel& m) {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LinearSvmModel> || std::is_same_v<T, RbfSvmModel>) {
          return v.n_classes();
        } else {
          return v.n_classes;
        }
      },
      m);
}

// Per-zone matching scores. Comparable across zones for one input only.
inline std::vector<double> score(const RankerModel& model, const SparseVector& x) {
  return std::visit([&](const auto& m) { return m.score(x); }, model);
}

inline RankerModel train_model(const ModelConfig& cfg, const LabeledData& data) {
  cfg.validate();
  switch (cfg.kind) {
    case ModelKind::kLinearSvm:
      return train_linear_svm(data, {cfg.c, cfg.epochs, cfg.seed});
    case ModelKind::kRbfSvm: {
      RbfSvmOptions o;
      o.c = cfg.c;
      o.gamma = cfg.gamma;
      o.tol = cfg.tol;
      o.max_iterations = cfg.max_iterations;
      return train_rbf_svm(data, o);
    }
    case ModelKind::kRandomForest:
      return train_random_forest(data, {cfg.trees, cfg.seed, 0});
    case ModelKind::kRandomBaseline:
      data.validate(false);
      return RandomBaselineModel{data.dimension, data.n_classes, cfg.seed};
  }
  throw ConfigError("unknown model kind");
}

// --- serialization ---------------------------------------------------------

namespace detail {

inline nlohmann::json sparse_to_json(const SparseVector& v) {
  return {{"i", v.indices}, {"v", v.values}};
}

inline SparseVector sparse_from_json(const nlohmann::json& j, std::size_t dimension) {
  SparseVector v;
  v.indices = j.at("i").get<std::vector<std::uint32_t>>();
  v.values = j.at("v").get<std::vector<double>>();
  v.dimension = dimension;
  if (v.indices.size() != v.values.size()) throw ParseError("sparse vector arrays differ in length");
  return v;
}

inline nlohmann::json tree_to_json(const DecisionTree& t) {
  std::vector<std::int32_t> feature;
  std::vector<double> threshold;
  std::vector<std::uint32_t> left, right, counts_begin, counts_end;
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    counts_begin.push_back(n.counts_begin);
    counts_end.push_back(n.counts_end);
  }
  std::vector<std::uint32_t> leaf_class, leaf_count;
  for (const auto& [c, n] : t.leaf_counts) {
    leaf_class.push_back(c);
    leaf_count.push_back(n);
  }
  return {{"feature", feature},       {"threshold", threshold},   {"left", left},
          {"right", right},           {"counts_begin", counts_begin}, {"counts_end", counts_end},
          {"leaf_class", leaf_class}, {"leaf_count", leaf_count}, {"out_of_bag", t.out_of_bag}};
}

inline DecisionTree tree_from_json(const nlohmann::json& j, std::size_t dimension, std::size_t n_classes) {
  DecisionTree t;
  const auto feature = j.at("feature").get<std::vector<std::int32_t>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<std::uint32_t>>();
  const auto right = j.at("right").get<std::vector<std::uint32_t>>();
  const auto counts_begin = j.at("counts_begin").get<std::vector<std::uint32_t>>();
  const auto counts_end = j.at("counts_end").get<std::vector<std::uint32_t>>();
  const auto leaf_class = j.at("leaf_class").get<std::vector<std::uint32_t>>();
  const auto leaf_count = j.at("leaf_count").get<std::vector<std::uint32_t>>();
  const std::size_t n = feature.size();
  if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n ||
      counts_begin.size() != n || counts_end.size() != n || leaf_class.size() != leaf_count.size()) {
    throw ParseError("malformed tree arrays");
  }
  for (std::size_t k = 0; k < n; ++k) {
    DecisionTree::Node node{feature[k], threshold[k], left[k], right[k], counts_begin[k], counts_end[k]};
    if (node.is_leaf()) {
      if (node.counts_begin > node.counts_end || node.counts_end > leaf_class.size()) {
        throw ParseError("tree leaf histogram out of range");
      }
    } else if (static_cast<std::size_t>(node.feature) >= dimension || node.left >= n ||
               node.right >= n || !std::isfinite(node.threshold)) {
      throw ParseError("tree split node out of range");
    }
    t.nodes.push_back(node);
  }
  for (std::size_t k = 0; k < leaf_class.size(); ++k) {
    if (leaf_class[k] >= n_classes) throw ParseError("tree leaf class out of range");
    t.leaf_counts.emplace_back(leaf_class[k], leaf_count[k]);
  }
  t.out_of_bag = j.value("out_of_bag", std::size_t{0});
  return t;
}

}  // namespace detail

inline nlohmann::json model_to_json(const RankerModel& model, const ModelConfig& cfg,
                                    const std::string& vocabulary_hash) {
  nlohmann::json body;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearSvmModel>) {
          body = {{"weights", m.weights}, {"bias", m.bias}};
        } else if constexpr (std::is_same_v<T, RbfSvmModel>) {
          nlohmann::json svs = nlohmann::json::array();
          for (const auto& sv : m.support_vectors) svs.push_back(detail::sparse_to_json(sv));
          nlohmann::json stats = nlohmann::json::array();
          for (const auto& s : m.stats) {
            stats.push_back({{"iterations", s.iterations},
                             {"max_violation", s.max_violation},
                             {"dual_objective", s.dual_objective}});
          }
          body = {{"gamma", m.gamma}, {"support_vectors", svs}, {"coef", m.coef},
                  {"bias", m.bias},   {"stats", stats}};
        } else if constexpr (std::is_same_v<T, RandomForestModel>) {
          nlohmann::json trees = nlohmann::json::array();
          for (const auto& t : m.trees) trees.push_back(detail::tree_to_json(t));
          body = {{"features_per_split", m.options.resolved_features_per_split(m.dimension)},
                  {"trees", trees}};
        } else {
          body = nlohmann::json::object();
        }
      },
      model);
  return {{"format", "zonerec-model"},
          {"version", 1},
          {"kind", to_string(kind_of(model))},
          {"hyperparameters", cfg.to_json()},
          {"dimension", dimension_of(model)},
          {"n_classes", class_count_of(model)},
          {"vocabulary_hash", vocabulary_hash},
          {"body", body}};
}

struct LoadedModel {
  RankerModel model;
  ModelConfig config;
  std::string vocabulary_hash;
};

inline LoadedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "zonerec-model") throw ParseError("not a model document");
    if (j.value("version", 0) != 1) throw ParseError("unsupported model version");
    LoadedModel out;
    out.config = ModelConfig::from_json(j.at("hyperparameters"));
    out.vocabulary_hash = j.at("vocabulary_hash").get<std::string>();
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (kind != out.config.kind) throw ParseError("model kind disagrees with hyperparameters");
    const auto dimension = j.at("dimension").get<std::size_t>();
    const auto n_classes = j.at("n_classes").get<std::size_t>();
    const auto& body = j.at("body");
    switch (kind) {
      case ModelKind::kLinearSvm: {
        LinearSvmModel m;
        m.dimension = dimension;
        m.options = {out.config.c, out.config.epochs, out.config.seed};
        m.weights = body.at("weights").get<std::vector<std::vector<double>>>();
        m.bias = body.at("bias").get<std::vector<double>>();
        if (m.weights.size() != n_classes || m.bias.size() != n_classes) {
          throw ParseError("linear model class count mismatch");
        }
        for (const auto& w : m.weights) {
          if (w.size() != dimension) throw ParseError("linear model weight dimension mismatch");
        }
        out.model = std::move(m);
        break;
      }
      case ModelKind::kRbfSvm: {
        RbfSvmModel m;
        m.dimension = dimension;
        m.c = out.config.c;
        m.tol = out.config.tol;
        m.gamma = body.at("gamma").get<double>();
        for (const auto& sv : body.at("support_vectors")) {
          m.support_vectors.push_back(detail::sparse_from_json(sv, dimension));
        }
        m.coef = body.at("coef").get<std::vector<std::vector<double>>>();
        m.bias = body.at("bias").get<std::vector<double>>();
        for (const auto& s : body.value("stats", nlohmann::json::array())) {
          m.stats.push_back({s.at("iterations").get<std::size_t>(), s.at("max_violation").get<double>(),
                             s.at("dual_objective").get<double>()});
        }
        if (m.coef.size() != n_classes || m.bias.size() != n_classes) {
          throw ParseError("rbf model class count mismatch");
        }
        for (const auto& c : m.coef) {
          if (c.size() != m.support_vectors.size()) throw ParseError("rbf coefficient count mismatch");
        }
        out.model = std::move(m);
        break;
      }
      case ModelKind::kRandomForest: {
        RandomForestModel m;
        m.dimension = dimension;
        m.n_classes = n_classes;
        m.options = {out.config.trees, out.config.seed, 0, true};
        for (const auto& t : body.at("trees")) m.trees.push_back(detail::tree_from_json(t, dimension, n_classes));
        if (m.trees.empty()) throw ParseError("forest has no trees");
        out.model = std::move(m);
        break;
      }
      case ModelKind::kRandomBaseline:
        out.model = RandomBaselineModel{dimension, n_classes, out.config.seed};
        break;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

// Everything needed to serve: model, the vocabulary it was trained against,
// and provenance.
struct ModelBundle {
  RankerModel model;
  ModelConfig config;
  Vocabulary vocabulary;
  std::size_t zone_count = 0;
  nlohmann::json metadata = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"format", "zonerec-model-bundle"},
            {"version", 1},
            {"zone_count", zone_count},
            {"metadata", metadata},
            {"vocabulary", vocabulary.to_json()},
            {"model", model_to_json(model, config, vocabulary.hash())}};
  }

  static ModelBundle from_json(const nlohmann::json& j) {
    try {
      if (j.value("format", "") != "zonerec-model-bundle") throw ParseError("not a model bundle");
      if (j.value("version", 0) != 1) throw ParseError("unsupported model bundle version");
      ModelBundle b;
      b.vocabulary = Vocabulary::from_json(j.at("vocabulary"));
      auto loaded = model_from_json(j.at("model"));
      if (loaded.vocabulary_hash != b.vocabulary.hash()) {
        throw ValidationError("model was trained against a different vocabulary");
      }
      if (dimension_of(loaded.model) != b.vocabulary.size()) {
        throw ValidationError("model dimension does not match vocabulary size");
      }
      b.model = std::move(loaded.model);
      b.config = loaded.config;
      b.zone_count = j.at("zone_count").get<std::size_t>();
      b.metadata = j.value("metadata", nlohmann::json::object());
      if (class_count_of(b.model) != b.zone_count) {
        throw ValidationError("model class count does not match zone count");
      }
      return b;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("model bundle: ") + e.what());
    }
  }
};

}  // namespace zonerec
