#pragma once

// Random forest of unpruned Gini trees over sparse inputs.
//
// Every tree sees an n-sample bootstrap drawn with replacement (unless
// bootstrap is off). At each node
// ceil(sqrt(d)) candidate features are drawn without replacement; if none of
// them separates the node, further features are drawn until one does or all
// are exhausted. Trees grow until a node is pure or holds fewer than two
// (weighted) samples. Scores are the fraction of trees voting for each class.
//
// Split search only visits the node's nonzero values for a feature plus one
// implicit block for all zeros, which is what makes TF-IDF inputs tractable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "zonerec/dataset.hpp"
#include "zonerec/parallel.hpp"
#include "zonerec/random.hpp"

namespace zonerec {

struct RandomForestOptions {
  std::size_t trees = 100;
  std::uint64_t seed = 1;
  std::size_t features_per_split = 0;  // 0 selects ceil(sqrt(d))
  bool bootstrap = true;  // false grows every tree on the full training set

  void validate() const {
    if (trees < 1) throw ConfigError("random forest needs at least one tree");
  }

  std::size_t resolved_features_per_split(std::size_t dimension) const {
    if (features_per_split > 0) return std::min(features_per_split, dimension);
    return std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dimension)))));
  }
};

struct DecisionTree {
  struct Node {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x[feature] <= threshold
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t counts_begin = 0;  // leaf histogram range in `leaf_counts`
    std::uint32_t counts_end = 0;

    bool is_leaf() const { return feature < 0; }
  };

  std::vector<Node> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> leaf_counts;  // (class, count)
  std::size_t out_of_bag = 0;  // training samples never drawn for this tree

  const Node& leaf_for(const SparseVector& x) const {
    const Node* node = &nodes.front();
    while (!node->is_leaf()) {
      const double v = x.value_at(static_cast<std::size_t>(node->feature));
      node = &nodes[v <= node->threshold ? node->left : node->right];
    }
    return *node;
  }

  // Majority class of the reached leaf; ties go to the lowest class id.
  ZoneId predict(const SparseVector& x) const {
    const Node& leaf = leaf_for(x);
    std::uint32_t best_class = 0;
    std::uint32_t best_count = 0;
    for (std::uint32_t k = leaf.counts_begin; k < leaf.counts_end; ++k) {
      const auto [cls, count] = leaf_counts[k];
      if (count > best_count || (count == best_count && cls < best_class)) {
        best_class = cls;
        best_count = count;
      }
    }
    return best_class;
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.is_leaf(); }));
  }
};

struct RandomForestModel {
  std::size_t dimension = 0;
  std::size_t n_classes = 0;
  RandomForestOptions options;
  std::vector<DecisionTree> trees;

  std::vector<double> votes(const SparseVector& x) const {
    check_dimension(x, dimension);
    std::vector<double> v(n_classes, 0.0);
    for (const auto& t : trees) v[t.predict(x)] += 1.0;
    return v;
  }

  std::vector<double> score(const SparseVector& x) const {
    auto v = votes(x);
    const double inv = 1.0 / static_cast<double>(trees.size());
    for (double& e : v) e *= inv;
    return v;
  }
};

namespace detail {

// Column-major copy of the training matrix, each column sorted by value.
struct ColumnIndex {
  struct Entry {
    std::uint32_t sample;
    double value;
  };
  std::vector<std::vector<Entry>> columns;

  explicit ColumnIndex(const LabeledData& data) : columns(data.dimension) {
    for (std::uint32_t i = 0; i < data.size(); ++i) {
      const SparseVector& x = data.x[i];
      for (std::size_t k = 0; k < x.nnz(); ++k) columns[x.indices[k]].push_back({i, x.values[k]});
    }
    for (auto& col : columns) {
      std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) {
        return a.value != b.value ? a.value < b.value : a.sample < b.sample;
      });
    }
  }
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledData& data, const ColumnIndex& columns, std::size_t mtry,
              std::uint64_t seed, bool bootstrap = true)
      : data_(data),
        columns_(columns),
        mtry_(mtry),
        bootstrap_(bootstrap),
        rng_(seed),
        weight_(data.size(), 0),
        stamp_(data.size(), 0),
        totals_(data.n_classes, 0),
        nonzero_(data.n_classes, 0),
        left_(data.n_classes, 0),
        perm_(data.dimension) {
    for (std::uint32_t f = 0; f < perm_.size(); ++f) perm_[f] = f;
  }

  DecisionTree build() {
    const std::size_t n = data_.size();
    if (bootstrap_) {
      for (std::size_t k = 0; k < n; ++k) ++weight_[rng_.uniform_index(n)];
    } else {
      std::fill(weight_.begin(), weight_.end(), 1u);
    }
    std::vector<std::uint32_t> samples;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (weight_[i] > 0) samples.push_back(i);
    }
    tree_.out_of_bag = n - samples.size();
    samples_ = std::move(samples);

    struct Work {
      std::uint32_t node, begin, end;
    };
    tree_.nodes.emplace_back();
    std::vector<Work> stack{{0, 0, static_cast<std::uint32_t>(samples_.size())}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      Split split;
      if (!should_stop(w.begin, w.end)) split = find_split(w.begin, w.end);
      if (!split.valid) {
        make_leaf(w.node, w.begin, w.end);
        continue;
      }
      const std::uint32_t mid = partition(w.begin, w.end, split);
      const auto left = static_cast<std::uint32_t>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes.emplace_back();
      auto& node = tree_.nodes[w.node];
      node.feature = static_cast<std::int32_t>(split.feature);
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, mid, w.end});
      stack.push_back({left, w.begin, mid});
    }
    return std::move(tree_);
  }

 private:
  struct Split {
    bool valid = false;
    std::uint32_t feature = 0;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
  };

  struct Item {
    double value;
    std::uint32_t cls;
    std::uint32_t weight;
  };

  // Fills totals_ / present_ for the node; true when it must become a leaf.
  bool should_stop(std::uint32_t begin, std::uint32_t end) {
    for (auto c : present_) totals_[c] = 0;
    present_.clear();
    node_weight_ = 0;
    for (std::uint32_t k = begin; k < end; ++k) {
      const std::uint32_t s = samples_[k];
      const auto c = static_cast<std::uint32_t>(data_.y[s]);
      if (totals_[c] == 0) present_.push_back(c);
      totals_[c] += weight_[s];
      node_weight_ += weight_[s];
    }
    std::sort(present_.begin(), present_.end());
    return present_.size() <= 1 || node_weight_ < 2;
  }

  void make_leaf(std::uint32_t node_index, std::uint32_t begin, std::uint32_t end) {
    should_stop(begin, end);  // refresh totals_ for this node
    auto& node = tree_.nodes[node_index];
    node.feature = -1;
    node.counts_begin = static_cast<std::uint32_t>(tree_.leaf_counts.size());
    for (auto c : present_) tree_.leaf_counts.emplace_back(c, totals_[c]);
    node.counts_end = static_cast<std::uint32_t>(tree_.leaf_counts.size());
  }

  Split find_split(std::uint32_t begin, std::uint32_t end) {
    ++current_stamp_;
    for (std::uint32_t k = begin; k < end; ++k) stamp_[samples_[k]] = current_stamp_;

    double parent_sq = 0.0;
    for (auto c : present_) parent_sq += static_cast<double>(totals_[c]) * totals_[c];

    Split best;
    const std::size_t d = perm_.size();
    for (std::size_t k = 0; k < d; ++k) {
      if (k >= mtry_ && best.valid) break;
      const std::size_t r = k + static_cast<std::size_t>(rng_.uniform_index(d - k));
      std::swap(perm_[k], perm_[r]);
      evaluate(perm_[k], begin, end, parent_sq, best);
    }
    return best;
  }

  void gather(std::uint32_t f, std::uint32_t begin, std::uint32_t end) {
    items_.clear();
    const auto& col = columns_.columns[f];
    const std::size_t node_size = end - begin;
    if (col.size() <= node_size * 8) {
      for (const auto& e : col) {
        if (stamp_[e.sample] == current_stamp_) {
          items_.push_back({e.value, static_cast<std::uint32_t>(data_.y[e.sample]), weight_[e.sample]});
        }
      }
    } else {
      for (std::uint32_t k = begin; k < end; ++k) {
        const std::uint32_t s = samples_[k];
        const double v = data_.x[s].value_at(f);
        if (v != 0.0) items_.push_back({v, static_cast<std::uint32_t>(data_.y[s]), weight_[s]});
      }
      std::sort(items_.begin(), items_.end(),
                [](const Item& a, const Item& b) { return a.value < b.value; });
    }
  }

  void evaluate(std::uint32_t f, std::uint32_t begin, std::uint32_t end, double parent_sq,
                Split& best) {
    gather(f, begin, end);
    if (items_.empty()) return;  // all zeros in this node

    std::uint64_t nz_weight = 0;
    for (const Item& it : items_) {
      nonzero_[it.cls] += it.weight;
      nz_weight += it.weight;
    }
    const std::uint64_t zero_weight = node_weight_ - nz_weight;

    for (auto c : present_) left_[c] = 0;
    double left_sq = 0.0;
    double right_sq = parent_sq;
    double w_left = 0.0;
    const auto w_total = static_cast<double>(node_weight_);

    auto move_left = [&](std::uint32_t c, double w) {
      const double l = left_[c];
      const double r = static_cast<double>(totals_[c]) - l;
      left_sq += 2.0 * w * l + w * w;
      right_sq += -2.0 * w * r + w * w;
      left_[c] += static_cast<std::uint32_t>(w);
      w_left += w;
    };
    auto consider = [&](double below, double above) {
      const double w_right = w_total - w_left;
      if (w_left <= 0.0 || w_right <= 0.0) return;
      const double score = left_sq / w_left + right_sq / w_right;
      if (score > best.score) {
        double t = below + (above - below) * 0.5;
        if (!(t < above)) t = below;
        best = {true, f, t, score};
      }
    };

    // Ascending order: negatives, the zero block, positives.
    std::size_t k = 0;
    bool have_prev = false;
    double prev = 0.0;
    auto step_item = [&](const Item& it) {
      if (have_prev && it.value != prev) consider(prev, it.value);
      move_left(it.cls, it.weight);
      prev = it.value;
      have_prev = true;
    };
    for (; k < items_.size() && items_[k].value < 0.0; ++k) step_item(items_[k]);
    if (zero_weight > 0) {
      if (have_prev) consider(prev, 0.0);
      for (auto c : present_) {
        const std::uint32_t zc = totals_[c] - nonzero_[c];
        if (zc > 0) move_left(c, zc);
      }
      prev = 0.0;
      have_prev = true;
    }
    for (; k < items_.size(); ++k) step_item(items_[k]);

    for (const Item& it : items_) nonzero_[it.cls] = 0;
  }

  std::uint32_t partition(std::uint32_t begin, std::uint32_t end, const Split& split) {
    auto first = samples_.begin() + begin;
    auto last = samples_.begin() + end;
    auto mid = std::stable_partition(first, last, [&](std::uint32_t s) {
      return data_.x[s].value_at(split.feature) <= split.threshold;
    });
    return static_cast<std::uint32_t>(mid - samples_.begin());
  }

  const LabeledData& data_;
  const ColumnIndex& columns_;
  std::size_t mtry_;
  bool bootstrap_;
  Rng rng_;
  std::vector<std::uint32_t> weight_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t current_stamp_ = 0;
  std::vector<std::uint32_t> totals_;
  std::vector<std::uint32_t> nonzero_;
  std::vector<std::uint32_t> left_;
  std::vector<std::uint32_t> present_;
  std::uint64_t node_weight_ = 0;
  std::vector<std::uint32_t> perm_;
  std::vector<std::uint32_t> samples_;
  std::vector<Item> items_;
  DecisionTree tree_;
};

}  // namespace detail

inline RandomForestModel train_random_forest(const LabeledData& data,
                                             const RandomForestOptions& options = {}) {
  options.validate();
  data.validate(/*require_two_classes=*/false);
  if (data.dimension == 0) throw ValidationError("random forest needs at least one feature");

  const detail::ColumnIndex columns(data);
  const std::size_t mtry = options.resolved_features_per_split(data.dimension);

  RandomForestModel model;
  model.dimension = data.dimension;
  model.n_classes = data.n_classes;
  model.options = options;
  model.trees.resize(options.trees);
  parallel_for(options.trees, [&](std::size_t t) {
    detail::TreeBuilder builder(data, columns, mtry, mix_seed(options.seed, t), options.bootstrap);
    model.trees[t] = builder.build();
  });
  return model;
}

}  // namespace zonerec
