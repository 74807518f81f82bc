#include <doctest.h>

#include <cmath>

#include "landau/collision.hpp"
#include "landau/distribution.hpp"
#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/solver.hpp"

using namespace landau;

namespace {

double l1(const VelocityGrid& g, std::span<const double> q) {
  double s = 0.0;
  for (double x : q) s += std::abs(x);
  return s * g.weight();
}

/// H at t_end from fixed steps of size dt, no projection.
double entropy_at(const GridDistribution& f0, double dt, Stepper stepper, double t_end) {
  SolverConfig c;
  c.gamma = -3.0;
  c.half_extent = f0.grid().half_extent();
  c.points_per_axis = f0.grid().points_per_axis();
  c.dt = dt;
  c.t_end = t_end;
  c.adaptive = false;
  c.conservation_projection = false;
  c.stepper = stepper;
  c.snapshot_stride = 1000;
  c.backend = PairBackend::kDirect;
  return solve(f0, c).diagnostics.back().entropy;
}

}  // namespace

TEST_CASE("discrete conservation of the five invariants") {
  const VelocityGrid g(7.0, 16);
  const Corpus c = random_corpus(g, 11, 2, 0.0);
  for (const auto& f : c.members)
    for (PairBackend backend : {PairBackend::kDirect, PairBackend::kFft}) {
      const auto q = collision_operator(f, -3.0, backend);
      const double norm = l1(g, q);
      std::vector<double> phi(g.size());
      for (int which = 0; which < 5; ++which) {
        for (std::size_t k = 0; k < g.size(); ++k) {
          const Vec3 v = g.node(k);
          phi[k] = which == 0 ? 1.0 : which < 4 ? v[which - 1] : v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        }
        CHECK(std::abs(weak_pairing(g, q, phi)) <= 1e-12 * norm);
      }
    }
}

TEST_CASE("pairing of Q with log f is minus the dissipation") {
  const VelocityGrid g(7.0, 16);
  const Corpus c = random_corpus(g, 12, 3, 0.0);
  for (const auto& f : c.members) {
    std::vector<double> logf(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) logf[k] = std::log(std::max(f[k], kDensityFloor));
    const double d = entropy_dissipation_projection(f, -3.0);
    for (PairBackend backend : {PairBackend::kDirect, PairBackend::kFft})
      CHECK(-weak_pairing(g, collision_operator(f, -3.0, backend), logf) == doctest::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("pairwise operator agrees with the convolution weak form") {
  const Vec3 c0{0.3, -0.2, 0.1};
  const TestFunction phi{
      [&](const Vec3& v) {
        const double r2 = (v[0] - c0[0]) * (v[0] - c0[0]) + (v[1] - c0[1]) * (v[1] - c0[1]) + (v[2] - c0[2]) * (v[2] - c0[2]);
        return std::exp(-0.25 * r2);
      },
      [&](const Vec3& v) {
        const double r2 = (v[0] - c0[0]) * (v[0] - c0[0]) + (v[1] - c0[1]) * (v[1] - c0[1]) + (v[2] - c0[2]) * (v[2] - c0[2]);
        const double e = std::exp(-0.25 * r2);
        return Vec3{-0.5 * (v[0] - c0[0]) * e, -0.5 * (v[1] - c0[1]) * e, -0.5 * (v[2] - c0[2]) * e};
      },
      [&](const Vec3& v) {
        const double r2 = (v[0] - c0[0]) * (v[0] - c0[0]) + (v[1] - c0[1]) * (v[1] - c0[1]) + (v[2] - c0[2]) * (v[2] - c0[2]);
        const double e = std::exp(-0.25 * r2);
        Mat3 h{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            h[i][j] = e * (0.25 * (v[i] - c0[i]) * (v[j] - c0[j]) - (i == j ? 0.5 : 0.0));
        return h;
      }};
  for (double gamma : {0.0, -3.0}) {
    const VelocityGrid fine(7.0, 40);
    const double reference = weak_form_convolution(gaussian_mixture(fine, bimaxwellian_parameters(1.0)), gamma, phi);
    std::vector<double> errors;
    for (int n : {16, 24, 32}) {
      const VelocityGrid g(7.0, n);
      const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(1.0));
      const auto q = collision_operator(f, gamma, PairBackend::kFft);
      errors.push_back(std::abs(weak_pairing(g, q, sample(g, phi.value)) - reference));
    }
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
    CHECK(errors[0] / errors[2] > 2.0);
    CHECK(errors[2] < 0.15 * std::abs(reference));
  }
}

TEST_CASE("Maxwellian trajectory is stationary") {
  SolverConfig c;
  c.points_per_axis = 20;
  c.t_end = 1.0;
  const GridDistribution mu = reduced_maxwellian(VelocityGrid(c.half_extent, c.points_per_axis));
  const Trajectory t = solve(mu, c);
  double diff = 0.0;
  const auto& last = t.snapshots.back().f;
  for (std::size_t k = 0; k < mu.size(); ++k) diff += std::abs(last[k] - mu[k]);
  CHECK(diff * mu.grid().weight() <= 1e-6);
  CHECK(t.snapshots.back().time == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& d : t.diagnostics) CHECK(d.drift_max <= 1e-10);
}

TEST_CASE("one Euler step on a bi-Maxwellian lowers H and conserves") {
  const VelocityGrid g(7.0, 16);
  const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(1.0));
  const CollisionOperator op(g, -3.0, PairBackend::kDirect);
  const Moments m0 = moments(f);
  const StepResult r = step(op, f, 0.01, Stepper::kEuler, true, m0);
  CHECK(entropy(r.f) < entropy(f));
  CHECK(invariant_drift(moments(r.f), m0) <= 1e-13);
}

TEST_CASE("a step that would go negative fails loudly") {
  const VelocityGrid g(7.0, 12);
  const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(1.5));
  const CollisionOperator op(g, -3.0, PairBackend::kDirect);
  CHECK_THROWS_AS(step(op, f, 1e3, Stepper::kEuler, false, moments(f)), StepSizeError);
  SolverConfig c;
  c.points_per_axis = 12;
  c.adaptive = false;
  c.dt = 1e3;
  c.t_end = 1e3;
  try {
    solve(f, c);
    FAIL("expected a step failure");
  } catch (const StepSizeError& e) {
    CHECK(e.time() == 0.0);
    CHECK(e.dt() == 1e3);
  }
}

TEST_CASE("Euler is first order and Heun second order in time") {
  const VelocityGrid g(6.0, 10);
  const GridDistribution f = gaussian_mixture(g, bimaxwellian_parameters(1.0));
  const double t_end = 0.02;
  for (auto [stepper, expected] : {std::pair{Stepper::kEuler, 1.0}, std::pair{Stepper::kHeun, 2.0}}) {
    const double h1 = entropy_at(f, 0.001, stepper, t_end);
    const double h2 = entropy_at(f, 0.0005, stepper, t_end);
    const double h3 = entropy_at(f, 0.00025, stepper, t_end);
    const double order = std::log2((h1 - h2) / (h2 - h3));
    CHECK(order == doctest::Approx(expected).epsilon(0.15));
  }
}

TEST_CASE("Maxwellian molecules: pressure relaxes as exp(-12 t)") {
  // For gamma = 0, unit mass and energy 3, d/dt P = -12 (P - Id).
  SolverConfig c;
  c.gamma = 0.0;
  c.half_extent = 5.0;
  c.points_per_axis = 24;
  c.dt = 0.002;
  c.t_end = 0.06;
  c.snapshot_stride = 30;
  const VelocityGrid g(c.half_extent, c.points_per_axis);
  const Mat3 cov{{{1.4, 0.2, 0.0}, {0.2, 1.0, 0.0}, {0.0, 0.0, 0.6}}};
  const GridDistribution f0 = covariance_gaussian(g, cov, {0.0, 0.0, 0.0});
  const Trajectory t = solve(f0, c);
  const Mat3 p0 = pressure_tensor(f0);
  double previous_offdiag = std::abs(p0[0][1]);
  for (const auto& s : t.snapshots) {
    if (s.time == 0.0) continue;
    const Mat3 p = pressure_tensor(s.f);
    const double decay = std::exp(-12.0 * s.time);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double id = i == j ? 1.0 : 0.0;
        const double expected = (p0[i][j] - id) * decay;
        CHECK(std::abs((p[i][j] - id) - expected) <= 5e-3 * std::abs(p0[0][0] - 1.0));
      }
    CHECK(std::abs(p[0][1]) < previous_offdiag);
    previous_offdiag = std::abs(p[0][1]);
  }
}

TEST_CASE("solver config validation") {
  SolverConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.gamma = -4.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.t_end = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_stepper("heun") == Stepper::kHeun);
  CHECK_THROWS_AS(parse_stepper("rk4"), ConfigError);
}
