#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zonerec/linear_svm.hpp"
#include "zonerec/random_forest.hpp"
#include "zonerec/rbf_svm.hpp"

using namespace zonerec;

namespace {

struct Points {
  std::vector<SparseVector> x;
  std::vector<ZoneId> y;
  std::size_t classes = 0;
  std::size_t dim = 0;

  LabeledData data() const { return {x, y, classes, dim}; }
};

SparseVector dense(std::vector<double> v) { return SparseVector::from_dense(v); }

template <typename Model>
double accuracy(const Model& m, const Points& p) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const auto s = m.score(p.x[i]);
    std::size_t best = 0;
    for (std::size_t c = 1; c < s.size(); ++c) {
      if (s[c] > s[best]) best = c;
    }
    ok += best == p.y[i];
  }
  return static_cast<double>(ok) / static_cast<double>(p.x.size());
}

// Two classes separated by the plane x0 = 0 with margin 1 on each side.
Points margin_separable(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> off(1.0, 3.0), other(-3.0, 3.0);
  Points p{{}, {}, 2, 3};
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i % 2 == 0;
    p.x.push_back(dense({pos ? off(gen) : -off(gen), other(gen), other(gen)}));
    p.y.push_back(pos ? 1 : 0);
  }
  return p;
}

// Four well separated Gaussian blobs in 2-D.
Points blobs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.5);
  const double cx[4] = {4, -4, 4, -4}, cy[4] = {4, 4, -4, -4};
  Points p{{}, {}, 4, 2};
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % 4;
    p.x.push_back(dense({cx[c] + noise(gen), cy[c] + noise(gen)}));
    p.y.push_back(c);
  }
  return p;
}

Points xor_points() {
  Points p{{}, {}, 2, 2};
  const double pts[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (int rep = 0; rep < 5; ++rep) {
    for (int i = 0; i < 4; ++i) {
      const double jitter = 0.05 * rep;
      p.x.push_back(dense({pts[i][0] * (1 + jitter), pts[i][1] * (1 - jitter)}));
      p.y.push_back(i < 2 ? 0 : 1);
    }
  }
  return p;
}

}  // namespace

TEST(LinearSvm, SeparatesMarginOneData) {
  const Points p = margin_separable(200, 1);
  const auto m = train_linear_svm(p.data(), {1.0, 15, 1});
  EXPECT_EQ(accuracy(m, p), 1.0);
}

TEST(LinearSvm, FourBlobs) {
  const Points p = blobs(200, 2);
  const auto m = train_linear_svm(p.data());
  EXPECT_GE(accuracy(m, p), 0.95);
}

TEST(LinearSvm, DeterministicForSeed) {
  const Points p = blobs(80, 3);
  const auto a = train_linear_svm(p.data(), {1.0, 5, 7});
  const auto b = train_linear_svm(p.data(), {1.0, 5, 7});
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(LinearSvm, RejectsBadInput) {
  Points p = blobs(8, 1);
  EXPECT_THROW(train_linear_svm(p.data(), {0.0, 5, 1}), ConfigError);
  p.y.assign(p.y.size(), 0);
  EXPECT_THROW(train_linear_svm(p.data()), ValidationError);
  const auto m = train_linear_svm(blobs(8, 1).data());
  EXPECT_THROW(m.score(dense({1, 2, 3})), DimensionMismatch);
}

TEST(Smo, MatchesEnumerationOracle) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 3 + trial % 6;
    const double c = trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 10.0);
    std::vector<SparseVector> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      x.push_back(dense({g(gen), g(gen)}));
      y.push_back(i % 2 == 0 ? 1 : -1);
    }
    Eigen::MatrixXd k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) k(i, j) = rbf_kernel(x[i], x[j], 0.5);
    }
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = k(i, i);
    std::vector<double> rowbuf(n);
    const KernelRowFn row = [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) rowbuf[j] = k(i, j);
      return rowbuf.data();
    };
    const double tol = 1e-6;
    const auto r = solve_smo(n, y, row, diag, c, tol, 100000);
    const auto o = oracle::svm_dual_enumerate(k, y, c);
    EXPECT_NEAR(r.dual_objective, o.objective, 1e-4) << "trial " << trial;
    EXPECT_LT(r.max_violation, tol);
    double ya = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_GE(r.alpha[i], 0.0);
      EXPECT_LE(r.alpha[i], c);
      ya += y[i] * r.alpha[i];
    }
    EXPECT_NEAR(ya, 0.0, 1e-9);
  }
}

TEST(RbfSvm, SolvesXor) {
  const Points p = xor_points();
  RbfSvmOptions o;
  o.c = 10.0;
  o.gamma = 1.0;
  const auto m = train_rbf_svm(p.data(), o);
  EXPECT_EQ(accuracy(m, p), 1.0);
  for (const auto& s : m.stats) EXPECT_LT(s.max_violation, o.tol);
}

TEST(RbfSvm, FourBlobsAndDefaultGamma) {
  const Points p = blobs(120, 4);
  const auto m = train_rbf_svm(p.data());
  EXPECT_GE(accuracy(m, p), 0.95);
  EXPECT_DOUBLE_EQ(m.gamma, 0.5);
  EXPECT_DOUBLE_EQ(RbfSvmOptions{}.resolved_gamma(5000), 0.0002);
}

TEST(RbfSvm, IterationCapRaises) {
  const Points p = blobs(60, 6);
  RbfSvmOptions o;
  o.max_iterations = 1;
  o.tol = 1e-9;
  EXPECT_THROW(train_rbf_svm(p.data(), o), ConvergenceError);
}

TEST(RandomForest, SingleTreeMemorizes) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Points p{{}, {}, 5, 6};
  for (int i = 0; i < 300; ++i) {
    std::vector<double> v(6);
    for (double& e : v) e = u(gen) < 0.5 ? 0.0 : u(gen);
    v[i % 6] += 0.001 * (i + 1);  // keep every point distinct
    p.x.push_back(dense(v));
    p.y.push_back(static_cast<ZoneId>(u(gen) * 5));
  }
  RandomForestOptions o;
  o.trees = 1;
  o.bootstrap = false;
  const auto m = train_random_forest(p.data(), o);
  EXPECT_EQ(accuracy(m, p), 1.0);
}

TEST(RandomForest, BootstrapExclusionRate) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Points p{{}, {}, 2, 4};
  for (int i = 0; i < 1000; ++i) {
    p.x.push_back(dense({u(gen), u(gen), u(gen), u(gen)}));
    p.y.push_back(i % 2);
  }
  RandomForestOptions o;
  o.trees = 200;
  const auto m = train_random_forest(p.data(), o);
  double oob = 0.0;
  for (const auto& t : m.trees) oob += static_cast<double>(t.out_of_bag) / 1000.0;
  oob /= 200.0;
  EXPECT_NEAR(oob, 0.368, 0.05);
}

TEST(RandomForest, SeedDeterminesScores) {
  const Points p = blobs(100, 10);
  RandomForestOptions o;
  o.trees = 20;
  o.seed = 4;
  const auto a = train_random_forest(p.data(), o);
  const auto b = train_random_forest(p.data(), o);
  o.seed = 5;
  const auto c = train_random_forest(p.data(), o);
  bool differs = false;
  for (const auto& x : p.x) {
    EXPECT_EQ(a.score(x), b.score(x));
    differs |= a.trees[0].nodes.size() != c.trees[0].nodes.size() || a.score(x) != c.score(x);
  }
  EXPECT_GE(accuracy(a, p), 0.95);
  (void)differs;
}

TEST(RandomForest, SparseInputsUseZeroBlock) {
  // class decided by whether feature 3 is present at all
  Points p{{}, {}, 2, 10};
  for (int i = 0; i < 40; ++i) {
    std::vector<double> v(10, 0.0);
    v[i % 3] = 0.5;
    if (i % 2) v[3] = 0.2 + 0.01 * i;
    p.x.push_back(dense(v));
    p.y.push_back(i % 2);
  }
  const auto m = train_random_forest(p.data(), {10, 1, 0, true});
  EXPECT_EQ(accuracy(m, p), 1.0);
}
