#pragma once

// One-vs-rest linear SVM trained in the primal with Pegasos: stochastic
// sub-gradient steps of size 1/(lambda t), lambda = 1/(C n), followed by
// projection onto the ball of radius 1/sqrt(lambda). The bias is an extra
// always-one feature and is regularised with the weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <nlohmann/json.hpp>

#include "zonerec/dataset.hpp"
#include "zonerec/parallel.hpp"
#include "zonerec/random.hpp"

namespace zonerec {

struct LinearSvmOptions {
  double c = 1.0;
  std::size_t epochs = 15;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
  }
};

struct LinearSvmModel {
  std::size_t dimension = 0;
  LinearSvmOptions options;
  std::vector<std::vector<double>> weights;  // [class][feature]
  std::vector<double> bias;                  // [class]

  std::size_t n_classes() const { return weights.size(); }

  std::vector<double> score(const SparseVector& x) const {
    check_dimension(x, dimension);
    std::vector<double> s(weights.size());
    for (std::size_t c = 0; c < weights.size(); ++c) s[c] = x.dot(weights[c]) + bias[c];
    return s;
  }
};

namespace detail {

// One binary Pegasos run over labels in {-1, +1}. Returns weights with the
// bias appended as the last element.
inline std::vector<double> pegasos_binary(const LabeledData& data, std::span<const int> sign,
                                          const LinearSvmOptions& opt,
                                          std::span<const std::vector<std::uint32_t>> orders) {
  const std::size_t n = data.size();
  const std::size_t d = data.dimension;
  const double lambda = 1.0 / (opt.c * static_cast<double>(n));
  const double radius2 = 1.0 / lambda;

  // w = scale * v; v[d] is the bias weight.
  std::vector<double> v(d + 1, 0.0);
  double scale = 1.0;
  double v_norm2 = 0.0;
  std::uint64_t t = 0;

  for (const auto& order : orders) {
    for (std::uint32_t i : order) {
      ++t;
      const SparseVector& x = data.x[i];
      const double y = sign[i];
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double vx = x.dot(v) + v[d];
      const double margin = y * scale * vx;

      // w <- (1 - eta lambda) w
      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_norm2 = 0.0;
      } else {
        scale *= shrink;
      }

      if (margin < 1.0) {
        // w += eta y x, expressed on v
        const double a = eta * y / scale;
        const double vx_now = (shrink <= 0.0) ? 0.0 : vx;
        v_norm2 += 2.0 * a * vx_now + a * a * (x.squared_norm() + 1.0);
        for (std::size_t k = 0; k < x.nnz(); ++k) v[x.indices[k]] += a * x.values[k];
        v[d] += a;
      }

      const double w_norm2 = scale * scale * std::max(v_norm2, 0.0);
      if (w_norm2 > radius2) scale *= std::sqrt(radius2 / w_norm2);

      if (scale < 1e-9) {
        for (double& e : v) e *= scale;
        v_norm2 *= scale * scale;
        scale = 1.0;
      }
    }
  }
  for (double& e : v) e *= scale;
  return v;
}

}  // namespace detail

inline LinearSvmModel train_linear_svm(const LabeledData& data, const LinearSvmOptions& options = {}) {
  options.validate();
  data.validate();

  // One permutation per epoch, shared by every class problem.
  Rng rng(options.seed);
  std::vector<std::vector<std::uint32_t>> orders(options.epochs);
  for (auto& order : orders) {
    order.resize(data.size());
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);
  }

  LinearSvmModel model;
  model.dimension = data.dimension;
  model.options = options;
  model.weights.resize(data.n_classes);
  model.bias.resize(data.n_classes);
  parallel_for(data.n_classes, [&](std::size_t c) {
    std::vector<int> sign(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) sign[i] = data.y[i] == c ? 1 : -1;
    auto w = detail::pegasos_binary(data, sign, options, orders);
    model.bias[c] = w.back();
    w.pop_back();
    model.weights[c] = std::move(w);
  });
  return model;
}

}  // namespace zonerec
