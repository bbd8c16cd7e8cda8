#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "gaf/errors.hpp"

namespace gaf {

enum class Direction { X, Y };

template <int S>
using StateVector = Eigen::Matrix<double, S, 1>;
template <int S>
using StateMatrix = Eigen::Matrix<double, S, S>;

/// Jacobian Df = right * diag(values) * left, left = right^{-1}.
template <int S>
struct Eigensystem {
  StateMatrix<S> right;
  StateVector<S> values;
  StateMatrix<S> left;
};

/// Df = plus + minus with the positive / negative wave speeds separated.
template <int S>
struct SplitJacobians {
  StateMatrix<S> plus;
  StateMatrix<S> minus;
};

/// Scalar transport with constant velocity a: f(q) = a q.
struct LinearAdvection {
  static constexpr int kComponents = 1;
  using State = StateVector<1>;
  using Matrix = StateMatrix<1>;

  double ax = 1.0;
  double ay = 0.0;

  /// a = (cos theta, sin theta).
  static LinearAdvection from_angle(double theta) {
    return {std::cos(theta), std::sin(theta)};
  }

  double speed(Direction d) const noexcept { return d == Direction::X ? ax : ay; }
  State flux(const State& q, Direction d) const { return speed(d) * q; }
  Matrix jacobian(const State&, Direction d) const { return Matrix::Constant(speed(d)); }
  Eigensystem<1> eigensystem(const State&, Direction d) const {
    return {Matrix::Identity(), State::Constant(speed(d)), Matrix::Identity()};
  }
  double max_signal_speed(const State&) const { return std::max(std::abs(ax), std::abs(ay)); }
  void check_admissible(const State&) const {}
};

/// Linear acoustics, state ordered (p, v_x, v_y):
///   p_t + c div v = 0,  v_t + c grad p = 0.
struct Acoustics {
  static constexpr int kComponents = 3;
  using State = StateVector<3>;
  using Matrix = StateMatrix<3>;

  double c = 1.0;

  State flux(const State& q, Direction d) const {
    if (d == Direction::X) return State(c * q[1], c * q[0], 0.0);
    return State(c * q[2], 0.0, c * q[0]);
  }
  Matrix jacobian(const State&, Direction d) const {
    Matrix j = Matrix::Zero();
    const int v = d == Direction::X ? 1 : 2;
    j(0, v) = c;
    j(v, 0) = c;
    return j;
  }
  Eigensystem<3> eigensystem(const State&, Direction d) const;
  double max_signal_speed(const State&) const { return std::abs(c); }
  void check_admissible(const State&) const {}
};

/// Compressible Euler equations for an ideal polytropic gas,
/// conserved state (rho, rho u, rho v, E), E = p/(gamma-1) + rho |v|^2 / 2.
struct Euler {
  static constexpr int kComponents = 4;
  using State = StateVector<4>;
  using Matrix = StateMatrix<4>;

  double gamma = 1.4;

  struct Primitive {
    double rho;
    double u;
    double v;
    double p;
  };

  Primitive to_primitive(const State& q) const;
  State to_conserved(const Primitive& w) const;
  double pressure(const State& q) const;
  double sound_speed(const State& q) const;

  State flux(const State& q, Direction d) const;
  Matrix jacobian(const State& q, Direction d) const;
  Eigensystem<4> eigensystem(const State& q, Direction d) const;
  double max_signal_speed(const State& q) const;
  /// Throws InadmissibleState when rho <= 0 or p <= 0.
  void check_admissible(const State& q) const;
};

using AnyModel = std::variant<LinearAdvection, Acoustics, Euler>;

inline int component_count(const AnyModel& m) {
  return std::visit([](const auto& x) { return std::decay_t<decltype(x)>::kComponents; }, m);
}

std::string model_name(const AnyModel& m);

template <class Model>
SplitJacobians<Model::kComponents> split_jacobian(const Model& model,
                                                  const typename Model::State& q, Direction d) {
  constexpr int S = Model::kComponents;
  model.check_admissible(q);
  const auto es = model.eigensystem(q, d);
  const StateVector<S> lp = es.values.cwiseMax(0.0);
  const StateVector<S> lm = es.values.cwiseMin(0.0);
  return {es.right * lp.asDiagonal() * es.left, es.right * lm.asDiagonal() * es.left};
}

inline SplitJacobians<1> split_jacobian(const LinearAdvection& m, const LinearAdvection::State&,
                                        Direction d) {
  const double a = m.speed(d);
  return {StateMatrix<1>::Constant(std::max(a, 0.0)), StateMatrix<1>::Constant(std::min(a, 0.0))};
}

}  // namespace gaf
