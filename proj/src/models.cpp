#include "gaf/models.hpp"

#include <sstream>

namespace gaf {

Eigensystem<3> Acoustics::eigensystem(const State&, Direction d) const {
  Eigensystem<3> es;
  const int v = d == Direction::X ? 1 : 2;
  const int w = d == Direction::X ? 2 : 1;
  es.values = State(-c, 0.0, c);
  es.right.setZero();
  es.right(0, 0) = 1.0;
  es.right(v, 0) = -1.0;
  es.right(w, 1) = 1.0;
  es.right(0, 2) = 1.0;
  es.right(v, 2) = 1.0;
  es.left.setZero();
  es.left(0, 0) = 0.5;
  es.left(0, v) = -0.5;
  es.left(1, w) = 1.0;
  es.left(2, 0) = 0.5;
  es.left(2, v) = 0.5;
  return es;
}

Euler::Primitive Euler::to_primitive(const State& q) const {
  if (!(q[0] > 0.0)) {
    std::ostringstream os;
    os << "non-positive density rho=" << q[0];
    throw InadmissibleState(os.str());
  }
  const double u = q[1] / q[0];
  const double v = q[2] / q[0];
  const double p = (gamma - 1.0) * (q[3] - 0.5 * q[0] * (u * u + v * v));
  return {q[0], u, v, p};
}

Euler::State Euler::to_conserved(const Primitive& w) const {
  if (!(w.rho > 0.0)) throw InadmissibleState("non-positive density");
  return State(w.rho, w.rho * w.u, w.rho * w.v,
               w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v));
}

double Euler::pressure(const State& q) const {
  const double ke = 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0];
  return (gamma - 1.0) * (q[3] - ke);
}

double Euler::sound_speed(const State& q) const { return std::sqrt(gamma * pressure(q) / q[0]); }

void Euler::check_admissible(const State& q) const {
  const double p = pressure(q);
  if (!(q[0] > 0.0) || !(p > 0.0) || !std::isfinite(q[3])) {
    std::ostringstream os;
    os << "inadmissible Euler state rho=" << q[0] << " p=" << p;
    throw InadmissibleState(os.str());
  }
}

Euler::State Euler::flux(const State& q, Direction d) const {
  const double rho = q[0];
  const double u = q[1] / rho;
  const double v = q[2] / rho;
  const double p = pressure(q);
  if (d == Direction::X) return State(q[1], q[1] * u + p, q[2] * u, (q[3] + p) * u);
  return State(q[2], q[1] * v, q[2] * v + p, (q[3] + p) * v);
}

Euler::Matrix Euler::jacobian(const State& q, Direction d) const {
  const double u = q[1] / q[0];
  const double v = q[2] / q[0];
  const double g1 = gamma - 1.0;
  const double k = 0.5 * (u * u + v * v);
  const double h = (q[3] + pressure(q)) / q[0];
  Matrix a;
  if (d == Direction::X) {
    a << 0.0, 1.0, 0.0, 0.0,
        g1 * k - u * u, (3.0 - gamma) * u, -g1 * v, g1,
        -u * v, v, u, 0.0,
        u * (g1 * k - h), h - g1 * u * u, -g1 * u * v, gamma * u;
  } else {
    a << 0.0, 0.0, 1.0, 0.0,
        -u * v, v, u, 0.0,
        g1 * k - v * v, -g1 * u, (3.0 - gamma) * v, g1,
        v * (g1 * k - h), -g1 * u * v, h - g1 * v * v, gamma * v;
  }
  return a;
}

Eigensystem<4> Euler::eigensystem(const State& q, Direction d) const {
  const double u = q[1] / q[0];
  const double v = q[2] / q[0];
  const double p = pressure(q);
  const double c = std::sqrt(gamma * p / q[0]);
  const double h = (q[3] + p) / q[0];
  const double k = 0.5 * (u * u + v * v);
  const double b1 = (gamma - 1.0) / (c * c);
  const double b2 = b1 * k;
  Eigensystem<4> es;
  if (d == Direction::X) {
    es.values = State(u - c, u, u, u + c);
    es.right << 1.0, 1.0, 0.0, 1.0,
        u - c, u, 0.0, u + c,
        v, v, 1.0, v,
        h - u * c, k, v, h + u * c;
    es.left << 0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1,
        1.0 - b2, b1 * u, b1 * v, -b1,
        -v, 0.0, 1.0, 0.0,
        0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1;
  } else {
    es.values = State(v - c, v, v, v + c);
    es.right << 1.0, 1.0, 0.0, 1.0,
        u, u, 1.0, u,
        v - c, v, 0.0, v + c,
        h - v * c, k, u, h + v * c;
    es.left << 0.5 * (b2 + v / c), -0.5 * b1 * u, -0.5 * (b1 * v + 1.0 / c), 0.5 * b1,
        1.0 - b2, b1 * u, b1 * v, -b1,
        -u, 1.0, 0.0, 0.0,
        0.5 * (b2 - v / c), -0.5 * b1 * u, -0.5 * (b1 * v - 1.0 / c), 0.5 * b1;
  }
  return es;
}

double Euler::max_signal_speed(const State& q) const {
  const double c = sound_speed(q);
  return std::max(std::abs(q[1] / q[0]), std::abs(q[2] / q[0])) + c;
}

std::string model_name(const AnyModel& m) {
  struct Namer {
    std::string operator()(const LinearAdvection&) const { return "advection"; }
    std::string operator()(const Acoustics&) const { return "acoustics"; }
    std::string operator()(const Euler&) const { return "euler"; }
  };
  return std::visit(Namer{}, m);
}

}  // namespace gaf
