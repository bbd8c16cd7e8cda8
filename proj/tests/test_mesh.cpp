#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "gaf/mesh.hpp"

using namespace gaf;

TEST_CASE("grid spacing and invalid construction") {
  const GridSpec g(4, 5, -1.0, 1.0, 0.0, 2.0);
  CHECK(g.dx() == doctest::Approx(0.5));
  CHECK(g.dy() == doctest::Approx(0.4));
  CHECK(g.cell_count() == 20);
  CHECK(g.periodic());
  CHECK_THROWS_AS(GridSpec(0, 4, 0, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 4, 1, 1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(4, 4, 0, 1, 2, 1), std::invalid_argument);
}

TEST_CASE("to_reference examples") {
  const auto g = GridSpec::unit_square(10);
  const CellIndex c{0, 0};
  const auto centre = g.to_reference(c, g.center(c));
  CHECK(centre.x == doctest::Approx(0.0));
  CHECK(centre.y == doctest::Approx(0.0));
  const auto corner = g.to_reference(c, {0.1, 0.1});
  CHECK(corner.x == doctest::Approx(0.5));
  CHECK(corner.y == doctest::Approx(0.5));
  const auto p = g.to_reference(c, {0.075, 0.025});
  CHECK(p.x == doctest::Approx(0.25));
  CHECK(p.y == doctest::Approx(-0.25));
}

TEST_CASE("reference round trip") {
  const GridSpec g(7, 3, -2.0, 3.0, 1.0, 4.0);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      for (int k = 0; k < 10; ++k) {
        const Point2 x = g.from_reference({i, j}, {u(rng), u(rng)});
        const Point2 back = g.from_reference({i, j}, g.to_reference({i, j}, x));
        CHECK(std::abs(back.x - x.x) <= 1e-14 * 4);
        CHECK(std::abs(back.y - x.y) <= 1e-14 * 4);
      }
}

TEST_CASE("periodic neighbours") {
  const auto g = GridSpec::unit_square(5);
  CHECK(g.neighbor({0, 0}, -1, 0) == CellIndex{4, 0});
  CHECK(g.neighbor({4, 4}, 1, 1) == CellIndex{0, 0});
  CHECK(g.neighbor({2, 3}, 0, 0) == CellIndex{2, 3});
  CHECK(g.neighbor({1, 1}, -7, 13) == CellIndex{4, 4});
}

TEST_CASE("neighbour lookup is a bijection") {
  const GridSpec g(4, 3, 0, 1, 0, 1);
  for (int di = -2; di <= 2; ++di)
    for (int dj = -2; dj <= 2; ++dj) {
      std::set<int> seen;
      for (int c = 0; c < g.cell_count(); ++c)
        seen.insert(g.linear_index(g.neighbor(g.cell_at(c), di, dj)));
      CHECK(seen.size() == static_cast<std::size_t>(g.cell_count()));
    }
}

TEST_CASE("linear index round trip") {
  const GridSpec g(6, 4, 0, 1, 0, 1);
  for (int c = 0; c < g.cell_count(); ++c) CHECK(g.linear_index(g.cell_at(c)) == c);
  CHECK(g.linear_index({2, 1}) == 8);
}
