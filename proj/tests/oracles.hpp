#pragma once

// Independent reference implementations used by unit and acceptance tests.
// Nothing here calls into the library code it is checking.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// ---- ranking metrics over a full ranked list --------------------------------

// `ranking` lists every zone id, best first; `relevant` flags relevance per id.
inline std::vector<int> relevance_vector(const std::vector<std::size_t>& ranking, const std::vector<bool>& relevant) {
  std::vector<int> rel;
  for (std::size_t z : ranking) rel.push_back(relevant[z] ? 1 : 0);
  return rel;
}

inline double hit(const std::vector<int>& rel, std::size_t k) {
  for (std::size_t i = 0; i < std::min(k, rel.size()); ++i) {
    if (rel[i]) return 1.0;
  }
  return 0.0;
}

// AP@k = (1 / min(R, k)) * sum_{i<=k} P@i * rel_i.
inline double average_precision(const std::vector<int>& rel, std::size_t k) {
  std::size_t total_relevant = 0;
  for (int r : rel) total_relevant += r;
  if (total_relevant == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < std::min(k, rel.size()); ++i) {
    if (!rel[i]) continue;
    std::size_t hits = 0;
    for (std::size_t j = 0; j <= i; ++j) hits += rel[j];
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(total_relevant, k));
}

inline double dcg(const std::vector<int>& rel, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(k, rel.size()); ++i) {
    s += (std::pow(2.0, rel[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
  }
  return s;
}

inline double ndcg(const std::vector<int>& rel, std::size_t k) {
  std::vector<int> ideal = rel;
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal, k);
  return idcg == 0.0 ? 0.0 : dcg(rel, k) / idcg;
}

// ---- point in polygon --------------------------------------------------------

struct Pt {
  double x, y;
};

inline double is_left(Pt a, Pt b, Pt p) { return (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y); }

// Sunday's winding number; `poly` is open (last vertex != first).
inline int winding_number(const std::vector<Pt>& poly, Pt p) {
  int wn = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt a = poly[i];
    const Pt b = poly[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && is_left(a, b, p) > 0) ++wn;
    } else if (b.y <= p.y && is_left(a, b, p) < 0) {
      --wn;
    }
  }
  return wn;
}

inline double segment_distance(Pt a, Pt b, Pt p) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
  return std::sqrt(ex * ex + ey * ey);
}

inline double boundary_distance(const std::vector<Pt>& poly, Pt p) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) d = std::min(d, segment_distance(poly[i], poly[(i + 1) % poly.size()], p));
  return d;
}

// Star-shaped around (cx, cy): sorted angles with random radii never
// self-intersect.
inline std::vector<Pt> random_simple_polygon(std::mt19937_64& gen, double cx, double cy, double r_min, double r_max,
                                             std::size_t vertices) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> radius(r_min, r_max);
  std::vector<double> angles(vertices);
  for (double& a : angles) a = angle(gen);
  std::sort(angles.begin(), angles.end());
  std::vector<Pt> poly;
  for (double a : angles) {
    const double r = radius(gen);
    poly.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  return poly;
}

// ---- SVM dual by active-set enumeration ------------------------------------

struct DualSolution {
  std::vector<double> alpha;
  double objective = -std::numeric_limits<double>::infinity();
};

// max  sum a - 1/2 a'Qa,  Q_ij = y_i y_j K_ij,  0 <= a <= C,  y'a = 0.
// Every assignment of each point to {0, C, free} is tried; the free block
// solves the KKT equations exactly. The best feasible candidate is the optimum.
inline DualSolution svm_dual_enumerate(const Eigen::MatrixXd& kernel, const std::vector<int>& y, double c) {
  const int n = static_cast<int>(y.size());
  Eigen::MatrixXd q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) q(i, j) = y[i] * y[j] * kernel(i, j);
  }
  auto objective = [&](const Eigen::VectorXd& a) { return a.sum() - 0.5 * a.dot(q * a); };

  DualSolution best;
  std::vector<int> state(n, 0);  // 0 lower, 1 upper, 2 free
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    std::vector<int> free;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rest % 3);
      rest /= 3;
      if (state[i] == 1) a(i) = c;
      if (state[i] == 2) free.push_back(i);
    }
    const int f = static_cast<int>(free.size());
    if (f > 0) {
      Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f + 1, f + 1);
      Eigen::VectorXd rhs(f + 1);
      const Eigen::VectorXd qa = q * a;  // bound contributions only
      double ya = 0.0;
      for (int i = 0; i < n; ++i) ya += y[i] * a(i);
      for (int r = 0; r < f; ++r) {
        for (int s = 0; s < f; ++s) m(r, s) = q(free[r], free[s]);
        m(r, f) = y[free[r]];
        m(f, r) = y[free[r]];
        rhs(r) = 1.0 - qa(free[r]);
      }
      rhs(f) = -ya;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd sol = lu.solve(rhs);
      bool ok = true;
      for (int r = 0; r < f; ++r) {
        if (sol(r) < -1e-12 || sol(r) > c + 1e-12) ok = false;
        a(free[r]) = std::clamp(sol(r), 0.0, c);
      }
      if (!ok) continue;
    }
    double ya = 0.0;
    for (int i = 0; i < n; ++i) ya += y[i] * a(i);
    if (std::abs(ya) > 1e-9) continue;
    const double w = objective(a);
    if (w > best.objective) {
      best.objective = w;
      best.alpha.assign(a.data(), a.data() + n);
    }
  }
  return best;
}

}  // namespace oracle
