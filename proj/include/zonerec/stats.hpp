#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "zonerec/error.hpp"

namespace zonerec {

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

// Regularised incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
inline double student_t_two_tailed(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
}

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;
  std::size_t dof = 0;
  // Differences had zero variance: t is 0 (all equal) or +/-inf (constant
  // shift) and p is 1 or 0 by convention rather than from the distribution.
  bool degenerate_variance = false;
};

// Paired two-tailed t-test on per-fold values a[i] vs b[i].
inline TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("paired t-test needs equal-length samples");
  if (a.size() < 2) throw ValidationError("paired t-test needs at least two pairs");
  const std::size_t n = a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  const double var = ss / static_cast<double>(n - 1);

  TTestResult r;
  r.dof = n - 1;
  // Differences equal to within rounding count as zero variance.
  const double scale = std::max(std::fabs(mean), 1e-300);
  if (var == 0.0 || std::sqrt(var) <= 1e-12 * scale) {
    r.degenerate_variance = true;
    if (mean == 0.0) {
      r.t = 0.0;
      r.p_value = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
      r.p_value = 0.0;
    }
    return r;
  }
  r.t = mean / std::sqrt(var / static_cast<double>(n));
  r.p_value = student_t_two_tailed(r.t, static_cast<double>(r.dof));
  return r;
}

}  // namespace zonerec
