#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "landau/error.hpp"
#include "landau/grid.hpp"

using namespace landau;

TEST_CASE("lattice geometry and index order") {
  const VelocityGrid g(7.0, 32);
  CHECK(g.spacing() == doctest::Approx(14.0 / 31.0).epsilon(1e-15));
  CHECK(g.weight() == doctest::Approx(std::pow(14.0 / 31.0, 3)).epsilon(1e-15));
  CHECK(g.size() == 32768u);
  CHECK(g.coordinate(0) == -7.0);
  CHECK(g.coordinate(31) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(g.index(1, 0, 0) == 1u);
  CHECK(g.index(0, 1, 0) == 32u);
  CHECK(g.index(0, 0, 1) == 1024u);
  for (std::size_t idx : {0u, 17u, 1055u, 32767u}) {
    const auto [i, j, k] = g.unravel(idx);
    CHECK(g.index(i, j, k) == idx);
  }
  CHECK(!g.is_interior(g.index(0, 5, 5)));
  CHECK(g.is_interior(g.index(1, 5, 30)));
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(VelocityGrid(0.0, 16), ConfigError);
  CHECK_THROWS_AS(VelocityGrid(7.0, 2), ConfigError);
}

TEST_CASE("quadrature of a unit Gaussian matches the erf-cubed oracle") {
  for (int n : {24, 48}) {
    const VelocityGrid g(7.0, n);
    const auto f = sample(g, [](const Vec3& v) {
      return std::exp(-0.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2])) / std::pow(2.0 * M_PI, 1.5);
    });
    const double oracle = std::pow(std::erf(7.0 / std::sqrt(2.0)), 3);
    CHECK(std::abs(integrate(g, f) - oracle) < 1e-10);
  }
}

TEST_CASE("integrate names the first non-finite node") {
  const VelocityGrid g(5.0, 8);
  std::vector<double> f(g.size(), 1.0);
  f[9] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(integrate(g, f), NumericError);
}

TEST_CASE("gradient is exact on quadratics, faces included") {
  const VelocityGrid g(3.0, 9);
  const auto q = sample(g, [](const Vec3& v) {
    return 1.0 + 2.0 * v[0] - v[1] + 0.5 * v[2] + v[0] * v[0] - 3.0 * v[1] * v[2] + 0.25 * v[2] * v[2];
  });
  const VectorField d = gradient(g, q);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec3 v = g.node(k);
    CHECK(d.x[k] == doctest::Approx(2.0 + 2.0 * v[0]).epsilon(1e-12));
    CHECK(d.y[k] == doctest::Approx(-1.0 - 3.0 * v[2]).epsilon(1e-12));
    CHECK(d.z[k] == doctest::Approx(0.5 - 3.0 * v[1] + 0.5 * v[2]).epsilon(1e-12));
  }
}

TEST_CASE("gradient_transpose is the exact adjoint") {
  const VelocityGrid g(4.0, 11);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> phi(g.size());
  VectorField field(g.size());
  for (auto& x : phi) x = u(rng);
  for (int a = 0; a < 3; ++a)
    for (auto& x : field[a]) x = u(rng);
  const VectorField d = gradient(g, phi);
  const std::vector<double> t = gradient_transpose(g, field);
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    for (int a = 0; a < 3; ++a) {
      lhs += d[a][k] * field[a][k];
      scale += std::abs(d[a][k] * field[a][k]);
    }
    rhs += phi[k] * t[k];
  }
  CHECK(std::abs(lhs - rhs) <= 1e-13 * scale);
}
