#pragma once

#include <vector>

namespace gaf {

/// One-dimensional rule on the reference interval [-1/2, 1/2]; weights sum to 1.
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;

  int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Gauss-Legendre rule with `count` points, exact up to degree 2*count - 1.
QuadratureRule gauss_legendre(int count);

/// Gauss-Lobatto rule with `count` >= 2 points (endpoints included),
/// exact up to degree 2*count - 3.
QuadratureRule gauss_lobatto(int count);

/// Legendre polynomial P_n and its derivative at x in [-1, 1].
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double x);

}  // namespace gaf
