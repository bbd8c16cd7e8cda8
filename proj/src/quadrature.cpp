#include "gaf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaf {

LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = x;
  for (int k = 2; k <= n; ++k) {
    const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
    p_prev = p;
    p = p_next;
  }
  // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1); endpoints handled separately.
  double dp;
  if (std::abs(std::abs(x) - 1.0) < 1e-15) {
    dp = 0.5 * n * (n + 1.0) * (x > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
  } else {
    dp = n * (x * p - p_prev) / (x * x - 1.0);
  }
  return {p, dp};
}

QuadratureRule gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be >= 1");
  QuadratureRule rule;
  rule.points.resize(count);
  rule.weights.resize(count);
  for (int k = 0; k < count; ++k) {
    double x = -std::cos(std::numbers::pi * (k + 0.75) / (count + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(count, x);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre(count, x);
    (void)p;
    rule.points[k] = 0.5 * x;
    // Weight on [-1,1] is 2 / ((1 - x^2) P'_n(x)^2); halve for [-1/2, 1/2] and normalize.
    rule.weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  if (count % 2 == 1) rule.points[count / 2] = 0.0;
  // Symmetrize to remove round-off asymmetry.
  for (int k = 0; k < count / 2; ++k) {
    const double xs = 0.5 * (rule.points[count - 1 - k] - rule.points[k]);
    const double ws = 0.5 * (rule.weights[count - 1 - k] + rule.weights[k]);
    rule.points[k] = -xs;
    rule.points[count - 1 - k] = xs;
    rule.weights[k] = rule.weights[count - 1 - k] = ws;
  }
  return rule;
}

QuadratureRule gauss_lobatto(int count) {
  if (count < 2) throw std::invalid_argument("gauss_lobatto: count must be >= 2");
  const int n = count - 1;
  QuadratureRule rule;
  rule.points.resize(count);
  rule.weights.resize(count);
  rule.points.front() = -0.5;
  rule.points.back() = 0.5;
  const double w_end = 1.0 / (n * (n + 1.0));
  rule.weights.front() = rule.weights.back() = w_end;
  // Interior nodes are the roots of P'_n; Newton on P'_n using
  // (1 - x^2) P''_n = 2 x P'_n - n (n+1) P_n.
  for (int k = 1; k < n; ++k) {
    double x = -std::cos(std::numbers::pi * k / n);
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(n, x);
      const double d2p = (2.0 * x * dp - n * (n + 1.0) * p) / (1.0 - x * x);
      const double step = dp / d2p;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const auto [p, dp] = legendre(n, x);
    (void)dp;
    rule.points[k] = 0.5 * x;
    rule.weights[k] = 1.0 / (n * (n + 1.0) * p * p);
  }
  if (count % 2 == 1) rule.points[count / 2] = 0.0;
  for (int k = 0; k < count / 2; ++k) {
    const double xs = 0.5 * (rule.points[count - 1 - k] - rule.points[k]);
    const double ws = 0.5 * (rule.weights[count - 1 - k] + rule.weights[k]);
    rule.points[k] = -xs;
    rule.points[count - 1 - k] = xs;
    rule.weights[k] = rule.weights[count - 1 - k] = ws;
  }
  return rule;
}

}  // namespace gaf
