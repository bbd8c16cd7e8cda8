#include <doctest.h>

#include <random>

#include "gaf/models.hpp"

using namespace gaf;

namespace {

template <class Model>
typename Model::Matrix fd_jacobian(const Model& m, const typename Model::State& q, Direction d) {
  typename Model::Matrix j;
  for (int c = 0; c < Model::kComponents; ++c) {
    const double h = 1e-6 * std::max(1.0, std::abs(q[c]));
    typename Model::State qp = q, qm = q;
    qp[c] += h;
    qm[c] -= h;
    j.col(c) = (m.flux(qp, d) - m.flux(qm, d)) / (2 * h);
  }
  return j;
}

Euler::State random_euler(std::mt19937& rng) {
  std::uniform_real_distribution<double> pos(0.2, 3.0), vel(-2.0, 2.0);
  return Euler{1.4}.to_conserved({pos(rng), vel(rng), vel(rng), pos(rng)});
}

template <class Model>
void check_model(const Model& m, const typename Model::State& q) {
  for (auto d : {Direction::X, Direction::Y}) {
    const auto fd = fd_jacobian(m, q, d);
    const auto jac = m.jacobian(q, d);
    CHECK((jac - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    const auto es = m.eigensystem(q, d);
    const typename Model::Matrix rebuilt = es.right * es.values.asDiagonal() * es.left;
    CHECK((rebuilt - jac).norm() <= 1e-10 * std::max(1.0, jac.norm()));
    CHECK((es.right * es.left - Model::Matrix::Identity()).norm() < 1e-10);
    const auto sp = split_jacobian(m, q, d);
    CHECK((sp.plus + sp.minus - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
    CHECK((sp.plus + sp.minus - jac).norm() <= 1e-12 * std::max(1.0, jac.norm()));
    Eigen::EigenSolver<typename Model::Matrix> ep(sp.plus), em(sp.minus);
    const double scale = 1e-10 * std::max(1.0, jac.norm());
    for (int k = 0; k < Model::kComponents; ++k) {
      CHECK(ep.eigenvalues()[k].real() >= -scale);
      CHECK(em.eigenvalues()[k].real() <= scale);
      CHECK(std::abs(ep.eigenvalues()[k].imag()) <= scale);
    }
  }
}

}  // namespace

TEST_CASE("advection splitting") {
  const LinearAdvection right{1.0, 0.0};
  const auto s = split_jacobian(right, LinearAdvection::State::Constant(3.0), Direction::X);
  CHECK(s.plus(0, 0) == 1.0);
  CHECK(s.minus(0, 0) == 0.0);
  const LinearAdvection left{-1.0, 0.0};
  const auto t = split_jacobian(left, LinearAdvection::State::Constant(3.0), Direction::X);
  CHECK(t.plus(0, 0) == 0.0);
  CHECK(t.minus(0, 0) == -1.0);
  const auto a = LinearAdvection::from_angle(std::numbers::pi / 2);
  CHECK(std::abs(a.ax) < 1e-15);
  CHECK(a.ay == doctest::Approx(1.0));
  CHECK(a.max_signal_speed(LinearAdvection::State::Zero()) == doctest::Approx(1.0));
}

TEST_CASE("acoustics eigenstructure") {
  const Acoustics m{1.0};
  const Acoustics::State q(0.3, -0.2, 0.5);
  const auto es = m.eigensystem(q, Direction::X);
  std::vector<double> ev(es.values.data(), es.values.data() + 3);
  std::sort(ev.begin(), ev.end());
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(std::abs(ev[1]) < 1e-15);
  CHECK(ev[2] == doctest::Approx(1.0));
  const auto j = m.jacobian(q, Direction::X);
  CHECK(j(0, 1) == 1.0);
  CHECK(j(1, 0) == 1.0);
  CHECK(j(2, 2) == 0.0);
  check_model(m, q);
  // State independence.
  const auto s1 = split_jacobian(m, q, Direction::Y);
  const auto s2 = split_jacobian(m, Acoustics::State(5, 1, -3), Direction::Y);
  CHECK((s1.plus - s2.plus).norm() < 1e-15);
}

TEST_CASE("Euler state conversions") {
  const Euler m{1.4};
  const Euler::State rest(1.0, 0.0, 0.0, 1.0 / 0.4);
  CHECK(m.pressure(rest) == doctest::Approx(1.0));
  const auto q = m.to_conserved({1.0, 1.0, 1.0, 1.0});
  CHECK(q[3] == doctest::Approx(3.5));
  const auto a = m.to_conserved({1.3, 0.4, -0.7, 2.0});
  const auto b = m.to_conserved({1.3, -0.7, 0.4, 2.0});
  CHECK(a[1] == doctest::Approx(b[2]));
  CHECK(a[2] == doctest::Approx(b[1]));
  CHECK(a[3] == doctest::Approx(b[3]));
  const auto w = m.to_primitive(a);
  CHECK(w.rho == doctest::Approx(1.3));
  CHECK(w.u == doctest::Approx(0.4));
  CHECK(w.v == doctest::Approx(-0.7));
  CHECK(w.p == doctest::Approx(2.0));
  CHECK(m.sound_speed(a) == doctest::Approx(std::sqrt(1.4 * 2.0 / 1.3)));
}

TEST_CASE("Euler admissibility") {
  const Euler m{1.4};
  CHECK_THROWS_AS(m.check_admissible(Euler::State(-1.0, 0, 0, 2.5)), InadmissibleState);
  CHECK_THROWS_AS(m.check_admissible(m.to_conserved({1.0, 0, 0, -0.1})), InadmissibleState);
  CHECK_NOTHROW(m.check_admissible(m.to_conserved({1.0, 0, 0, 0.1})));
  CHECK_THROWS_AS(split_jacobian(m, Euler::State(0.0, 0, 0, 1), Direction::X), InadmissibleState);
}

TEST_CASE("Euler Jacobians against finite differences") {
  std::mt19937 rng(11);
  const Euler m{1.4};
  for (int k = 0; k < 100; ++k) check_model(m, random_euler(rng));
  for (int k = 0; k < 100; ++k) {
    std::normal_distribution<double> g;
    check_model(Acoustics{1.0 + std::abs(g(rng))}, Acoustics::State(g(rng), g(rng), g(rng)));
  }
}

TEST_CASE("Euler eigenvalues and rotational symmetry") {
  std::mt19937 rng(12);
  const Euler m{1.4};
  for (int k = 0; k < 20; ++k) {
    const auto q = random_euler(rng);
    const auto w = m.to_primitive(q);
    const double c = m.sound_speed(q);
    auto ex = m.eigensystem(q, Direction::X).values;
    std::sort(ex.data(), ex.data() + 4);
    CHECK(ex[0] == doctest::Approx(w.u - c));
    CHECK(ex[1] == doctest::Approx(w.u));
    CHECK(ex[2] == doctest::Approx(w.u));
    CHECK(ex[3] == doctest::Approx(w.u + c));
    // y-eigenvalues of q equal x-eigenvalues of q with swapped velocities.
    Euler::State sw = q;
    std::swap(sw[1], sw[2]);
    auto ey = m.eigensystem(q, Direction::Y).values;
    auto exs = m.eigensystem(sw, Direction::X).values;
    std::sort(ey.data(), ey.data() + 4);
    std::sort(exs.data(), exs.data() + 4);
    CHECK((ey - exs).norm() < 1e-12);
    CHECK(m.max_signal_speed(q) ==
          doctest::Approx(std::max(std::abs(w.u), std::abs(w.v)) + c));
  }
}

TEST_CASE("model variant helpers") {
  CHECK(component_count(AnyModel{LinearAdvection{}}) == 1);
  CHECK(component_count(AnyModel{Acoustics{}}) == 3);
  CHECK(component_count(AnyModel{Euler{}}) == 4);
  CHECK(model_name(AnyModel{Euler{}}) == "euler");
}
