#pragma once

// One-vs-rest RBF-kernel SVM. Each binary dual
//
//   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)
//   s.t. 0 <= a_i <= C,  sum(a_i y_i) = 0
//
// is solved by SMO: repeatedly pick the maximal violating pair (second-order
// working-set selection), solve the two-variable subproblem analytically and
// update the gradient, until the KKT gap m(a) - M(a) drops below tol.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <list>
#include <memory>
#include <unordered_map>
#include <vector>

#include "zonerec/dataset.hpp"

namespace zonerec {

struct RbfSvmOptions {
  double c = 1.0;
  double gamma = 0.0;  // <= 0 selects 1 / dimension
  double tol = 1e-3;
  std::size_t max_iterations = 0;  // 0 selects max(10^7, 100 n)
  std::size_t cache_mb = 256;

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be positive");
    if (!std::isfinite(gamma)) throw ConfigError("gamma must be finite");
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  }

  double resolved_gamma(std::size_t dimension) const {
    if (gamma > 0.0) return gamma;
    if (dimension == 0) throw ConfigError("cannot derive gamma for a zero-dimensional input");
    return 1.0 / static_cast<double>(dimension);
  }
};

inline double rbf_kernel(const SparseVector& a, const SparseVector& b, double gamma) {
  const double d2 = a.squared_norm() + b.squared_norm() - 2.0 * a.dot(b);
  return std::exp(-gamma * std::max(d2, 0.0));
}

struct SmoResult {
  std::vector<double> alpha;
  double bias = 0.0;  // decision = sum_i alpha_i y_i k(x_i, x) + bias
  double dual_objective = 0.0;
  double max_violation = 0.0;
  std::size_t iterations = 0;
};

// Row access into a symmetric kernel matrix. Rows are produced on demand.
using KernelRowFn = std::function<const double*(std::size_t)>;

// Binary SMO over n points with labels y in {-1, +1}. `row(i)` returns
// k(x_i, x_0..x_{n-1}) and may invalidate earlier pointers; the first row of
// each working pair is copied before the second is fetched.
inline SmoResult solve_smo(std::size_t n, std::span<const int> y, const KernelRowFn& row,
                           std::span<const double> diag, double c, double tol,
                           std::size_t max_iterations) {
  constexpr double kTau = 1e-12;
  SmoResult r;
  r.alpha.assign(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a

  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && r.alpha[t] < c) || (y[t] == -1 && r.alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && r.alpha[t] > 0.0) || (y[t] == -1 && r.alpha[t] < c);
  };

  for (;;) {
    // i: maximal -y_t G_t over I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -y[t] * grad[t] > gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    // Gap: gmax - min over I_low of -y_t G_t.
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (in_low(t)) gmin = std::min(gmin, -y[t] * grad[t]);
    }
    r.max_violation = (i == n || gmin == std::numeric_limits<double>::infinity()) ? 0.0 : gmax - gmin;
    if (r.max_violation < tol) break;
    if (r.iterations >= max_iterations) {
      throw ConvergenceError("SMO hit the iteration cap (" + std::to_string(max_iterations) +
                                 ") with KKT violation " + std::to_string(r.max_violation),
                             r.max_violation);
    }

    // j: second-order selection among violators in I_low.
    const double* ki = row(i);
    std::vector<double> ki_copy(ki, ki + n);
    std::size_t j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double b = gmax + y[t] * grad[t];
      if (b <= 0.0) continue;
      double a = diag[i] + diag[t] - 2.0 * ki_copy[t];
      if (a <= 0.0) a = kTau;
      const double score = -(b * b) / a;
      if (score < best) {
        best = score;
        j = t;
      }
    }
    if (j == n) break;
    const double* kj = row(j);

    const double qij = y[i] * y[j] * ki_copy[j];
    const double qii = diag[i];
    const double qjj = diag[j];
    const double old_ai = r.alpha[i];
    const double old_aj = r.alpha[j];
    double& ai = r.alpha[i];
    double& aj = r.alpha[j];

    if (y[i] != y[j]) {
      double quad = qii + qjj + 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > 0.0) {
        if (ai > c) {
          ai = c;
          aj = c - diff;
        }
      } else if (aj > c) {
        aj = c;
        ai = c + diff;
      }
    } else {
      double quad = qii + qjj - 2.0 * qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c) {
        if (ai > c) {
          ai = c;
          aj = sum - c;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > c) {
        if (aj > c) {
          aj = c;
          ai = sum - c;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }

    const double dai = ai - old_ai;
    const double daj = aj - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (y[i] * ki_copy[t] * dai + y[j] * kj[t] * daj);
    }
    ++r.iterations;
  }

  // Bias from free multipliers, or the midpoint of the feasible interval.
  double sum_free = 0.0;
  std::size_t n_free = 0;
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (r.alpha[t] >= c) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (r.alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho;
  if (n_free > 0) {
    rho = sum_free / static_cast<double>(n_free);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = 0.5 * (ub + lb);
  } else {
    rho = std::isfinite(ub) ? ub : (std::isfinite(lb) ? lb : 0.0);
  }
  r.bias = -rho;

  // W(a) = e'a - 1/2 a'Qa = -1/2 a'(G - e)
  double f = 0.0;
  for (std::size_t t = 0; t < n; ++t) f += r.alpha[t] * (grad[t] - 1.0);
  r.dual_objective = -0.5 * f;
  return r;
}

// LRU cache of kernel rows over a fixed training set.
class KernelRowCache {
 public:
  KernelRowCache(std::span<const SparseVector> x, double gamma, std::size_t budget_bytes)
      : x_(x), gamma_(gamma), norms_(x.size()), diag_(x.size(), 1.0) {
    for (std::size_t i = 0; i < x.size(); ++i) norms_[i] = x[i].squared_norm();
    const std::size_t row_bytes = std::max<std::size_t>(1, x.size() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / row_bytes);
    if (!x.empty()) dimension_ = x[0].dimension;
    scratch_.assign(dimension_, 0.0);
  }

  const std::vector<double>& diag() const { return diag_; }

  const double* row(std::size_t i) {
    if (auto it = index_.find(i); it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second.data();
    }
    std::vector<double> values;
    if (lru_.size() >= capacity_) {
      values = std::move(lru_.back().second);
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    values.resize(x_.size());
    const SparseVector& xi = x_[i];
    for (std::size_t k = 0; k < xi.nnz(); ++k) scratch_[xi.indices[k]] = xi.values[k];
    for (std::size_t t = 0; t < x_.size(); ++t) {
      const double dot = x_[t].dot(scratch_);
      values[t] = std::exp(-gamma_ * std::max(norms_[i] + norms_[t] - 2.0 * dot, 0.0));
    }
    for (std::size_t k = 0; k < xi.nnz(); ++k) scratch_[xi.indices[k]] = 0.0;
    lru_.emplace_front(i, std::move(values));
    index_[i] = lru_.begin();
    return lru_.front().second.data();
  }

 private:
  std::span<const SparseVector> x_;
  double gamma_;
  std::vector<double> norms_;
  std::vector<double> diag_;
  std::size_t dimension_ = 0;
  std::size_t capacity_ = 2;
  std::vector<double> scratch_;
  std::list<std::pair<std::size_t, std::vector<double>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

struct RbfClassStats {
  std::size_t iterations = 0;
  double max_violation = 0.0;
  double dual_objective = 0.0;
};

struct RbfSvmModel {
  std::size_t dimension = 0;
  double c = 1.0;
  double gamma = 0.0;
  double tol = 1e-3;
  // Support vectors pooled across the one-vs-rest problems.
  std::vector<SparseVector> support_vectors;
  // coef[c][s] = alpha_s * y_s for class c over the pool (0 when not a SV).
  std::vector<std::vector<double>> coef;
  std::vector<double> bias;
  std::vector<RbfClassStats> stats;

  std::size_t n_classes() const { return coef.size(); }

  std::vector<double> score(const SparseVector& x) const {
    check_dimension(x, dimension);
    std::vector<double> k(support_vectors.size());
    for (std::size_t s = 0; s < support_vectors.size(); ++s) {
      k[s] = rbf_kernel(support_vectors[s], x, gamma);
    }
    std::vector<double> out(coef.size());
    for (std::size_t c = 0; c < coef.size(); ++c) {
      double v = bias[c];
      for (std::size_t s = 0; s < k.size(); ++s) v += coef[c][s] * k[s];
      out[c] = v;
    }
    return out;
  }
};

inline RbfSvmModel train_rbf_svm(const LabeledData& data, const RbfSvmOptions& options = {}) {
  options.validate();
  data.validate();
  const std::size_t n = data.size();
  const double gamma = options.resolved_gamma(data.dimension);
  const std::size_t cap =
      options.max_iterations > 0 ? options.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);

  // Rows are shared by every class problem, so one cache serves them all.
  KernelRowCache cache(data.x, gamma, options.cache_mb * 1024 * 1024);
  const KernelRowFn row = [&](std::size_t i) { return cache.row(i); };

  std::vector<std::vector<double>> alpha_y(data.n_classes);
  RbfSvmModel model;
  model.dimension = data.dimension;
  model.c = options.c;
  model.gamma = gamma;
  model.tol = options.tol;
  model.bias.resize(data.n_classes);
  model.stats.resize(data.n_classes);
  std::vector<int> sign(n);
  for (std::size_t c = 0; c < data.n_classes; ++c) {
    for (std::size_t i = 0; i < n; ++i) sign[i] = data.y[i] == c ? 1 : -1;
    const SmoResult r = solve_smo(n, sign, row, cache.diag(), options.c, options.tol, cap);
    alpha_y[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) alpha_y[c][i] = r.alpha[i] * sign[i];
    model.bias[c] = r.bias;
    model.stats[c] = {r.iterations, r.max_violation, r.dual_objective};
  }

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < data.n_classes; ++c) {
      if (alpha_y[c][i] != 0.0) {
        pool.push_back(i);
        break;
      }
    }
  }
  model.support_vectors.reserve(pool.size());
  for (std::size_t i : pool) model.support_vectors.push_back(data.x[i]);
  model.coef.assign(data.n_classes, std::vector<double>(pool.size()));
  for (std::size_t c = 0; c < data.n_classes; ++c) {
    for (std::size_t s = 0; s < pool.size(); ++s) model.coef[c][s] = alpha_y[c][pool[s]];
  }
  return model;
}

}  // namespace zonerec
