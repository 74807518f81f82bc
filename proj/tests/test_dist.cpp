#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "landau/distribution.hpp"
#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/snapshot_io.hpp"

using namespace landau;

namespace {

const VelocityGrid& grid32() {
  static const VelocityGrid g(7.0, 32);
  return g;
}

}  // namespace

TEST_CASE("shifted Maxwellian moments are closed form") {
  const GridDistribution f = maxwellian(grid32(), 1.3, {0.4, -0.2, 0.1}, 0.8);
  const Moments m = moments(f);
  CHECK(m.mass == doctest::Approx(1.3).epsilon(1e-10));
  CHECK(m.momentum[0] == doctest::Approx(1.3 * 0.4).epsilon(1e-10));
  CHECK(m.momentum[1] == doctest::Approx(-1.3 * 0.2).epsilon(1e-10));
  CHECK(m.momentum[2] == doctest::Approx(1.3 * 0.1).epsilon(1e-10));
  CHECK(m.energy == doctest::Approx(1.3 * (3.0 * 0.8 + 0.21)).epsilon(1e-10));
}

TEST_CASE("score of a sampled Maxwellian is -(v - u) / T to roundoff") {
  const Vec3 u{0.3, 0.0, -0.5};
  const double t = 1.4;
  const GridDistribution f = maxwellian(grid32(), 1.0, u, t);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3 v = grid32().node(k);
    for (int a = 0; a < 3; ++a) worst = std::max(worst, std::abs(f.score()[a][k] + (v[a] - u[a]) / t));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("anisotropic Gaussian has pressure diag(T)") {
  const GridDistribution f = anisotropic_gaussian(grid32(), 1.5, 1.0, 0.5);
  const Mat3 p = pressure_tensor(f);
  CHECK(p[0][0] == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(p[1][1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(p[2][2] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(p[0][1]) < 1e-12);
  CHECK(std::abs(p[1][2]) < 1e-12);
}

TEST_CASE("Gaussian relative entropy matches the KL closed form") {
  for (double t : {0.7, 1.0, 1.6}) {
    const Vec3 u{0.5, -0.3, 0.2};
    const GridDistribution f = maxwellian(grid32(), 1.0, u, t);
    const double kl = 1.5 * (t - 1.0 - std::log(t)) + 0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    CHECK(relative_entropy(f) == doctest::Approx(kl).epsilon(1e-5));
  }
  CHECK(entropy(reduced_maxwellian(grid32())) ==
        doctest::Approx(-1.5 * (1.0 + std::log(2.0 * M_PI))).epsilon(1e-10));
}

TEST_CASE("bi-Maxwellian and normalize give the reduced invariants") {
  const auto params = bimaxwellian_parameters(1.0);
  const GridDistribution f = gaussian_mixture(grid32(), params);
  const Moments m = moments(f);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(m.momentum[0]) < 1e-12);
  CHECK(m.energy == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(bimaxwellian_parameters(2.0), ConfigError);

  const GridDistribution g = normalize(maxwellian(grid32(), 2.0, {0.3, 0.1, 0.0}, 1.2));
  const Moments n = moments(g);
  CHECK(n.mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(n.momentum[0]) < 1e-9);
  CHECK(n.energy == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("invariant projection hits the target to roundoff") {
  const GridDistribution f = gaussian_mixture(grid32(), bimaxwellian_parameters(0.8));
  const Moments target{1.0, {0.0, 0.0, 0.0}, 3.0};
  std::vector<double> raw(f.data());
  for (std::size_t k = 0; k < raw.size(); k += 7) raw[k] *= 1.001;
  const auto projected = project_invariants(grid32(), raw, target);
  const Moments m = moments(grid32(), projected);
  CHECK(std::abs(m.mass - 1.0) < 1e-14);
  CHECK(std::abs(m.energy - 3.0) < 1e-13);
  for (int a = 0; a < 3; ++a) CHECK(std::abs(m.momentum[a]) < 1e-14);
}

TEST_CASE("corpus is seed-deterministic and respects the entropy bound") {
  const VelocityGrid g(7.0, 16);
  const Corpus a = random_corpus(g, 1, 6, 0.0);
  const Corpus b = random_corpus(g, 1, 6, 0.0);
  const Corpus c = random_corpus(g, 2, 6, 0.0);
  REQUIRE(a.members.size() == 6);
  CHECK(corpus_digest(a.members) == corpus_digest(b.members));
  CHECK(corpus_digest(a.members) != corpus_digest(c.members));
  for (const auto& f : a.members) {
    CHECK(entropy(f) <= 1e-12);
    const Moments m = moments(f);
    CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.energy == doctest::Approx(3.0).epsilon(1e-6));
  }
}

TEST_CASE("snapshot round trip is bit exact") {
  const auto dir = std::filesystem::temp_directory_path() / "landau_dist_test";
  std::filesystem::create_directories(dir);
  const GridDistribution f = gaussian_mixture(grid32(), bimaxwellian_parameters(1.2));
  write_snapshot(dir / "a.lgrid", f, -3.0, 0.125);
  const Snapshot s = read_snapshot(dir / "a.lgrid");
  CHECK(s.gamma == -3.0);
  CHECK(s.time == 0.125);
  CHECK(s.f.grid() == f.grid());
  CHECK(s.f.data() == f.data());

  std::ofstream(dir / "bad.lgrid") << "LANDAU-GRID 2\n";
  CHECK_THROWS_AS(read_snapshot(dir / "bad.lgrid"), IoError);
  CHECK_THROWS_AS(read_snapshot(dir / "missing.lgrid"), IoError);
}
