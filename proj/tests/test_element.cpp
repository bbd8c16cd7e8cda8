#include <doctest.h>

#include <cmath>
#include <random>

#include "gaf/element.hpp"
#include "gaf/errors.hpp"
#include "gaf/quadrature.hpp"

using namespace gaf;

namespace {

// Newton iteration on a Legendre polynomial given in closed form, mapped to [-1/2, 1/2].
template <class P, class DP>
double newton_root(P p, DP dp, double t) {
  for (int it = 0; it < 50; ++it) t -= p(t) / dp(t);
  return 0.5 * t;
}

double poly_eval(const std::vector<Monomial>& basis, const Eigen::VectorXd& c, Point2 x) {
  double v = 0.0;
  for (std::size_t s = 0; s < basis.size(); ++s)
    v += c[s] * std::pow(x.x, basis[s].px) * std::pow(x.y, basis[s].py);
  return v;
}

// DOF functionals evaluated independently of the library's Vandermonde:
// point evaluation and a 12-point tensor Gauss rule for the moments.
template <class F>
Eigen::VectorXd dof_values(const ElementDef& el, F v) {
  const auto rule = gauss_legendre(12);
  Eigen::VectorXd out(el.dof_count());
  for (int r = 0; r < el.dof_count(); ++r) {
    const auto& d = el.dofs()[r];
    if (d.is_point()) {
      out[r] = v(d.location);
    } else {
      const auto m = std::get<MomentDof>(d.kind);
      double s = 0.0;
      for (int a = 0; a < rule.size(); ++a)
        for (int b = 0; b < rule.size(); ++b) {
          const Point2 x{rule.points[a], rule.points[b]};
          s += rule.weights[a] * rule.weights[b] * std::pow(x.x, m.k) * std::pow(x.y, m.l) * v(x);
        }
      out[r] = (m.k + 1) * std::pow(2.0, m.k) * (m.l + 1) * std::pow(2.0, m.l) * s;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("Gauss edge nodes against Newton on Legendre polynomials") {
  CHECK(gauss_edge_nodes(1) == std::vector<double>{0.0});
  const auto n2 = gauss_edge_nodes(2);
  const double r2 = newton_root([](double t) { return 1.5 * t * t - 0.5; },
                                [](double t) { return 3.0 * t; }, 0.9);
  CHECK(n2[1] == doctest::Approx(r2).epsilon(1e-14));
  CHECK(n2[1] == doctest::Approx(0.28867513).epsilon(1e-8));
  CHECK(n2[0] == doctest::Approx(-n2[1]));
  const auto n3 = gauss_edge_nodes(3);
  const double r3 = newton_root([](double t) { return 2.5 * t * t * t - 1.5 * t; },
                                [](double t) { return 7.5 * t * t - 1.5; }, 0.9);
  CHECK(n3[2] == doctest::Approx(r3).epsilon(1e-14));
  CHECK(n3[2] == doctest::Approx(0.38729833).epsilon(1e-8));
  CHECK(n3[1] == doctest::Approx(0.0));
}

TEST_CASE("alternative edge nodes") {
  const auto u3 = alt_edge_nodes(3, EdgeNodeKind::Uniform);
  REQUIRE(u3.size() == 3);
  CHECK(u3[0] == doctest::Approx(-0.25));
  CHECK(u3[1] == doctest::Approx(0.0));
  CHECK(u3[2] == doctest::Approx(0.25));
  CHECK(alt_edge_nodes(1, EdgeNodeKind::Uniform) == std::vector<double>{0.0});
  const auto l2 = alt_edge_nodes(2, EdgeNodeKind::GaussLobatto);
  CHECK(l2[0] == doctest::Approx(-std::sqrt(5.0) / 10.0).epsilon(1e-14));
  CHECK(l2[1] == doctest::Approx(std::sqrt(5.0) / 10.0).epsilon(1e-14));
  for (auto kind : {EdgeNodeKind::Gauss, EdgeNodeKind::GaussLobatto, EdgeNodeKind::Uniform})
    for (int c = 1; c <= 6; ++c) {
      const auto n = edge_nodes(c, kind);
      for (int a = 0; a < c; ++a) CHECK(n[a] == doctest::Approx(-n[c - 1 - a]));
    }
}

TEST_CASE("parse and print enumerations") {
  CHECK(parse_moment_set("tri") == MomentSet::Triangle);
  CHECK(parse_moment_set("tensor") == MomentSet::Tensor);
  CHECK(parse_edge_node_kind("lobatto") == EdgeNodeKind::GaussLobatto);
  CHECK(parse_edge_node_kind(to_string(EdgeNodeKind::Uniform)) == EdgeNodeKind::Uniform);
  CHECK(parse_moment_set(to_string(MomentSet::Tensor)) == MomentSet::Tensor);
  CHECK_THROWS_AS(parse_moment_set("square"), std::invalid_argument);
  CHECK_THROWS_AS(parse_edge_node_kind("chebyshev"), std::invalid_argument);
}

TEST_CASE("moment index sets and counts") {
  const auto m6 = moment_indices(6, MomentSet::Triangle);
  const std::vector<Monomial> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  CHECK(m6 == expect);
  for (int n = 2; n <= 6; ++n) {
    CHECK(moment_indices(n, MomentSet::Triangle).size() ==
          static_cast<std::size_t>(std::max(1, (n - 3) * (n - 2) / 2)));
    CHECK(moment_indices(n, MomentSet::Tensor).size() ==
          static_cast<std::size_t>((n - 1) * (n - 1)));
  }
}

TEST_CASE("basis sizes") {
  const auto b2 = build_basis(2, MomentSet::Triangle);
  const std::vector<Monomial> expect{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1},
                                     {0, 2}, {2, 1}, {1, 2}, {2, 2}};
  REQUIRE(b2.size() == 9);
  for (const auto& m : expect) CHECK(std::find(b2.begin(), b2.end(), m) != b2.end());
  CHECK(build_basis(6, MomentSet::Triangle).size() == 30);
  CHECK(build_basis(3, MomentSet::Tensor).size() == 16);
}

TEST_CASE("moment functional examples") {
  CHECK(moment_functional(0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(moment_functional(1, 0, 1, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(moment_functional(1, 0, 0, 0) == doctest::Approx(0.0));
  // Quadrature oracle for a few higher entries.
  const auto rule = gauss_legendre(10);
  for (auto [k, l, m, n] : std::vector<std::array<int, 4>>{{2, 1, 2, 3}, {1, 1, 1, 1}, {3, 0, 1, 2}}) {
    double s = 0.0;
    for (int a = 0; a < rule.size(); ++a)
      for (int b = 0; b < rule.size(); ++b)
        s += rule.weights[a] * rule.weights[b] * std::pow(rule.points[a], k + m) *
             std::pow(rule.points[b], l + n);
    CHECK(moment_functional(k, l, m, n) == doctest::Approx(moment_normalization(k, l) * s));
  }
}

TEST_CASE("DOF layout order and Vandermonde entries") {
  const auto el = ElementDef::build(2);
  REQUIRE(el.dof_count() == 9);
  CHECK(el.vandermonde().rows() == 9);
  const auto& d = el.dofs();
  CHECK(d[0].location.x == -0.5);
  CHECK(d[0].location.y == -0.5);
  CHECK(d[1].location.x == 0.5);
  CHECK(d[2].location.y == 0.5);
  CHECK(d[3].location.x == -0.5);
  CHECK(std::get<EdgeDof>(d[el.edge_dof(Edge::Right, 0)].kind).edge == Edge::Right);
  CHECK(d[el.edge_dof(Edge::Right, 0)].location.x == 0.5);
  CHECK(d[el.edge_dof(Edge::Top, 0)].location.y == 0.5);
  CHECK(d[el.edge_dof(Edge::Left, 0)].location.x == -0.5);
  CHECK(d[el.edge_dof(Edge::Bottom, 0)].location.y == -0.5);
  CHECK(std::holds_alternative<MomentDof>(d[el.moment_dof(0)].kind));
  CHECK(el.vandermonde()(0, 0) == 1.0);
}

TEST_CASE("identity Vandermonde gives identity coefficients") {
  const auto s = solve_shape_coefficients(Eigen::MatrixXd::Identity(5, 5));
  CHECK((s.coefficients - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-15);
  CHECK(s.condition == doctest::Approx(1.0));
  Eigen::MatrixXd sing = Eigen::MatrixXd::Identity(3, 3);
  sing(2, 2) = 0.0;
  CHECK_THROWS_AS(solve_shape_coefficients(sing), UnisolvenceFailure);
}

TEST_CASE("DOF totals per cell") {
  const int expected[] = {9, 13, 17, 23, 30};
  for (int order = 3; order <= 7; ++order) {
    const auto el = ElementDef::build(order - 1);
    CHECK(el.dof_count() == expected[order - 3]);
    CHECK(el.dof_count() == 4 * el.degree() + el.moment_count());
    CHECK(static_cast<int>(el.basis().size()) == el.dof_count());
    CHECK(el.owned_count() == 1 + 2 * (order - 2) + el.moment_count());
  }
}

TEST_CASE("unisolvence, duality and interpolation exactness") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::normal_distribution<double> g;
  for (auto set : {MomentSet::Triangle, MomentSet::Tensor}) {
    for (int order = 3; order <= 7; ++order) {
      CAPTURE(order);
      const auto el = ElementDef::build(order - 1, set);
      CHECK(el.condition_number() < kUnisolvenceConditionLimit);
      CHECK(el.duality_residual() <= 1e-10);
      // Random members of the reconstruction space are interpolated exactly.
      for (int t = 0; t < 50; ++t) {
        Eigen::VectorXd c(el.basis().size());
        for (auto& x : c) x = g(rng);
        auto v = [&](Point2 x) { return poly_eval(el.basis(), c, x); };
        const Eigen::VectorXd dofs = dof_values(el, v);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
          const Point2 x{u(rng), u(rng)};
          worst = std::max(worst, std::abs(el.eval_shapes(x).dot(dofs) - v(x)));
        }
        CHECK(worst <= 1e-9 * c.norm());
      }
      // P^N is contained in the reconstruction space.
      for (int m = 0; m <= el.degree(); ++m)
        for (int n = 0; m + n <= el.degree(); ++n) {
          auto v = [&](Point2 x) { return std::pow(x.x, m) * std::pow(x.y, n); };
          const Eigen::VectorXd dofs = dof_values(el, v);
          const Point2 x{u(rng), u(rng)};
          CHECK(el.eval_shapes(x).dot(dofs) == doctest::Approx(v(x)).epsilon(1e-10));
        }
    }
  }
}

TEST_CASE("shape functions at point DOF locations") {
  for (int order = 3; order <= 7; ++order) {
    const auto el = ElementDef::build(order - 1);
    for (int r = 0; r < el.dof_count(); ++r) {
      if (!el.dofs()[r].is_point()) continue;
      const Eigen::VectorXd b = el.eval_shapes(el.dofs()[r].location);
      for (int s = 0; s < el.dof_count(); ++s)
        CHECK(b[s] == doctest::Approx(r == s ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("cell-average shape function") {
  const auto el = ElementDef::build(2);
  const int r = el.moment_dof(0);
  const auto rule = gauss_legendre(6);
  double integral = 0.0;
  for (int a = 0; a < rule.size(); ++a)
    for (int b = 0; b < rule.size(); ++b)
      integral += rule.weights[a] * rule.weights[b] *
                  el.eval_shapes({rule.points[a], rule.points[b]})[r];
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
  for (int s = 0; s < el.moment_dof(0); ++s)
    CHECK(std::abs(el.eval_shapes(el.dofs()[s].location)[r]) < 1e-12);
}

TEST_CASE("constants are reproduced") {
  const auto el = ElementDef::build(5);
  const Eigen::VectorXd dofs = dof_values(el, [](Point2) { return 2.5; });
  for (double x : {-0.5, -0.1, 0.3})
    for (double y : {-0.4, 0.0, 0.5}) CHECK(el.eval_shapes({x, y}).dot(dofs) == doctest::Approx(2.5));
}

TEST_CASE("gradient of x^2 y") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int order = 3; order <= 7; ++order) {
    const auto el = ElementDef::build(order - 1);
    const Eigen::VectorXd dofs = dof_values(el, [](Point2 x) { return x.x * x.x * x.y; });
    for (int k = 0; k < 10; ++k) {
      const Point2 x{u(rng), u(rng)};
      const auto gr = el.eval_shape_grads(x);
      CHECK(gr.dx.dot(dofs) == doctest::Approx(2 * x.x * x.y).epsilon(1e-10));
      CHECK(gr.dy.dot(dofs) == doctest::Approx(x.x * x.x).epsilon(1e-10));
    }
  }
}

TEST_CASE("mirror symmetry of shape functions") {
  // Reflection x -> -x swaps nodes 0<->1 and 2<->3, exchanges the left and
  // right edges and reverses nothing along the vertical edges.
  const auto el = ElementDef::build(4);
  const int np = el.edge_point_count();
  std::vector<int> mirror(el.dof_count());
  mirror[0] = 1, mirror[1] = 0, mirror[2] = 3, mirror[3] = 2;
  for (int a = 0; a < np; ++a) {
    mirror[el.edge_dof(Edge::Bottom, a)] = el.edge_dof(Edge::Bottom, np - 1 - a);
    mirror[el.edge_dof(Edge::Top, a)] = el.edge_dof(Edge::Top, np - 1 - a);
    mirror[el.edge_dof(Edge::Right, a)] = el.edge_dof(Edge::Left, a);
    mirror[el.edge_dof(Edge::Left, a)] = el.edge_dof(Edge::Right, a);
  }
  for (int m = 0; m < el.moment_count(); ++m) mirror[el.moment_dof(m)] = el.moment_dof(m);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 10; ++k) {
    const Point2 x{u(rng), u(rng)};
    const auto b = el.eval_shapes(x);
    const auto bm = el.eval_shapes({-x.x, x.y});
    for (int r = 0; r < el.dof_count(); ++r) {
      if (el.dofs()[r].is_point()) {
        CHECK(b[r] == doctest::Approx(bm[mirror[r]]).epsilon(1e-9));
      } else {
        // Moment test functions pick up (-1)^k under the reflection.
        const int kx = std::get<MomentDof>(el.dofs()[r].kind).k;
        CHECK(b[r] == doctest::Approx((kx % 2 ? -1.0 : 1.0) * bm[r]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("pruned reconstruction spaces are not unisolvent") {
  auto full_pn = [](int n) {
    std::vector<Monomial> b;
    for (int d = 0; d <= n; ++d)
      for (int k = d; k >= 0; --k) b.push_back({k, d - k});
    return b;
  };
  // N = 5: P^5 with the two first-order moments removed.
  CHECK_THROWS_AS(ElementDef::from_parts(5, gauss_edge_nodes(4), full_pn(5), {{0, 0}}),
                  UnisolvenceFailure);
  // N = 6: P^6 with (2,0) and (0,2) removed.
  CHECK_THROWS_AS(ElementDef::from_parts(6, gauss_edge_nodes(5), full_pn(6),
                                         {{0, 0}, {1, 0}, {0, 1}, {1, 1}}),
                  UnisolvenceFailure);
  // N = 4: P^4 extended by x^3 y^2 and x^2 y^3.
  auto b4 = full_pn(4);
  b4.push_back({3, 2});
  b4.push_back({2, 3});
  CHECK_THROWS_AS(ElementDef::from_parts(4, gauss_edge_nodes(3), b4, {{0, 0}}),
                  UnisolvenceFailure);
  // Size mismatch is rejected as well.
  CHECK_THROWS(ElementDef::from_parts(4, gauss_edge_nodes(3), full_pn(4), {{0, 0}}));
}
