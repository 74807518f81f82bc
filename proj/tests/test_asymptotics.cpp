#include <doctest.h>

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "landau/asymptotics.hpp"
#include "landau/error.hpp"

using namespace landau;

namespace {

/// x' = -C1 (1+t)^{-a} x + C2 (1+t)^{-b}, x(0) = C0, by dense dopri5.
std::vector<double> equality_ode(const GronwallParams& p, const std::vector<double>& times) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  State x{p.c0};
  std::vector<double> out;
  auto rhs = [&](const State& s, State& ds, double t) {
    ds[0] = -p.c1 * std::pow(1.0 + t, -p.a) * s[0] + p.c2 * std::pow(1.0 + t, -p.b);
  };
  auto obs = [&](const State& s, double) { out.push_back(s[0]); };
  auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3, obs);
  return out;
}

std::vector<double> log_times(double t_max, int n) {
  std::vector<double> t{0.0};
  for (int k = 0; k < n; ++k) t.push_back(std::expm1(std::log1p(t_max) * (k + 1) / n));
  return t;
}

}  // namespace

TEST_CASE("pure decay reduces to C0 exp(-C1 t)") {
  GronwallParams p{2.0, 0.7, 0.0, 0.0, 1.0};
  for (double t : {0.0, 0.5, 3.0, 10.0})
    CHECK(gronwall_closed_form(p, t) == doctest::Approx(2.0 * std::exp(-0.7 * t)).epsilon(1e-14));
}

TEST_CASE("closed form dominates the equality ODE for random admissible parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto times = log_times(200.0, 60);
  for (int trial = 0; trial < 20; ++trial) {
    GronwallParams p;
    p.a = 0.05 + 0.9 * u(rng);
    p.b = p.a + 0.05 + 1.5 * u(rng);
    p.c0 = 0.1 + 2.0 * u(rng);
    p.c1 = 0.1 + 3.0 * u(rng);
    p.c2 = 0.1 + 3.0 * u(rng);
    const auto ode = equality_ode(p, times);
    REQUIRE(ode.size() == times.size());
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double exact = gronwall_equality_solution(p, times[j]);
      CHECK(exact == doctest::Approx(ode[j]).epsilon(1e-7));
      CHECK(gronwall_closed_form(p, times[j]) >= ode[j] * (1.0 - 1e-9));
    }
  }
}

namespace {

double loglog_slope(const std::function<double(double)>& x, double t) {
  return (std::log(x(t * 1.01)) - std::log(x(t))) / (std::log1p(t * 1.01) - std::log1p(t));
}

}  // namespace

TEST_CASE("closed form decays like (1+t)^{-(b-a)}") {
  for (auto [a, b] : {std::pair{0.5, 1.25}, std::pair{0.7, 0.95}, std::pair{0.2, 0.9}}) {
    GronwallParams p{1.0, 1.0, 1.0, a, b};
    const double slope = loglog_slope([&](double t) { return gronwall_closed_form(p, t); }, 1e6);
    CHECK(slope == doctest::Approx(-(b - a)).epsilon(0.01));
  }
  // Random sets: wherever the exact solution has reached its power law at 1e6,
  // so has the bound.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int in_regime = 0;
  for (int trial = 0; trial < 20; ++trial) {
    GronwallParams p;
    p.a = 0.05 + 0.9 * u(rng);
    p.b = p.a + 0.05 + 1.5 * u(rng);
    p.c0 = 0.1 + 2.0 * u(rng);
    p.c1 = 0.1 + 3.0 * u(rng);
    p.c2 = 0.1 + 3.0 * u(rng);
    const double target = -(p.b - p.a);
    const double exact = loglog_slope([&](double t) { return gronwall_equality_solution(p, t); }, 1e6);
    if (std::abs(exact / target - 1.0) > 0.01) continue;
    ++in_regime;
    const double bound = loglog_slope([&](double t) { return gronwall_closed_form(p, t); }, 1e6);
    CHECK(bound == doctest::Approx(target).epsilon(0.01));
  }
  CHECK(in_regime >= 10);
}

TEST_CASE("invalid Gronwall parameters are rejected") {
  CHECK_THROWS_AS(gronwall_closed_form({1.0, 1.0, 1.0, 1.0, 2.0}, 1.0), ConfigError);
  CHECK_THROWS_AS(gronwall_closed_form({1.0, 1.0, 1.0, 0.5, 0.5}, 1.0), ConfigError);
  CHECK_THROWS_AS(gronwall_closed_form({1.0, 0.0, 1.0, 0.5, 1.0}, 1.0), ConfigError);
}

TEST_CASE("stretched Gronwall solves its equality ODE") {
  namespace odeint = boost::numeric::odeint;
  StretchedGronwallParams p{1.0, 0.8, 0.5, 0.5, 0.4};
  const double s = p.s, q = -3.0 / (3.0 + s);
  using State = std::array<double, 1>;
  auto rhs = [&](const State& x, State& dx, double t) {
    const double tt = std::max(t, 1e-300);
    const double lg = std::log1p(tt);
    const double rate = std::pow(1.0 + tt, -3.0 / (3.0 + s)) * std::pow(lg, q);
    const double power = std::pow(1.0 + tt, s / (3.0 + s));
    const double src = power * std::pow(lg, q) * std::exp(-p.kappa0 * power * std::pow(lg, -(3.0 + q * s) / 3.0));
    dx[0] = -p.c1 * rate * x[0] + p.c2 * src;
  };
  // The rate is singular like t^q at 0, so start slightly off zero from the quadrature value.
  const double t0 = 1e-6;
  State x{gronwall_stretched(p, t0)};
  std::vector<double> times{t0, 0.5, 2.0, 10.0, 50.0};
  std::vector<double> ode;
  auto stepper = odeint::make_dense_output(1e-11, 1e-11, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-8,
                          [&](const State& y, double) { ode.push_back(y[0]); });
  for (std::size_t j = 0; j < times.size(); ++j)
    CHECK(gronwall_stretched(p, times[j]) == doctest::Approx(ode[j]).epsilon(1e-6));
}

TEST_CASE("decay exponent in l-form and k-form") {
  for (double l : {10.0, 12.0, 15.0, 20.0}) {
    const double k = (2.0 * l - 9.0) / 3.0;
    CHECK(std::abs(decay_exponent_l_form(l) - decay_exponent_k_form(k)) < 1e-12);
  }
  CHECK(decay_exponent_l_form(12.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(decay_exponent_l_form(12.0) - 0.5) < 1e-15);
}

TEST_CASE("algebraic schedule windows") {
  const Schedule s = choose_schedule_algebraic(12.0);
  CHECK(s.k == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(s.nu_low == doctest::Approx(2.0 / 15.0).epsilon(1e-15));
  CHECK(s.nu_high == doctest::Approx(14.0 / 60.0).epsilon(1e-15));
  CHECK(s.nu > s.nu_low);
  CHECK(s.nu < s.nu_high);
  CHECK(s.nu * s.k > 2.0 / 3.0);
  CHECK(s.beta == doctest::Approx(s.b - s.a).epsilon(1e-14));
  CHECK(s.beta_sup == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.a > 0.0);
  CHECK(s.a < 1.0);
  CHECK_THROWS_AS(choose_schedule_algebraic(9.0), ConfigError);
  CHECK_THROWS_AS(choose_schedule_algebraic(9.5), ConfigError);
  CHECK_NOTHROW(choose_schedule_algebraic(9.6));
  CHECK_THROWS_AS(choose_schedule_algebraic(12.0, 0.0), ConfigError);
  CHECK_THROWS_AS(choose_schedule_algebraic(12.0, 1.0), ConfigError);
}

TEST_CASE("stretched schedule exponents") {
  const Schedule s = choose_schedule_stretched(0.5, 0.5);
  CHECK(s.power == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(s.log_power == doctest::Approx(6.0 / 7.0).epsilon(1e-15));
  CHECK(s.q == doctest::Approx(-6.0 / 7.0).epsilon(1e-15));
  CHECK_THROWS_AS(choose_schedule_stretched(0.6, 0.1), ConfigError);
  CHECK_THROWS_AS(choose_schedule_stretched(0.5, 2.0 / std::exp(1.0)), ConfigError);
  CHECK_THROWS_AS(choose_schedule_stretched(0.3, 0.0), ConfigError);
  CHECK_NOTHROW(choose_schedule_stretched(0.3, 5.0));
}

TEST_CASE("moment slope exponent") {
  CHECK(moment_slope_exponent(10.0, -3.0) == doctest::Approx(11.0).epsilon(1e-15));
  CHECK(moment_slope_exponent(10.0, -1.0) == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(moment_slope_exponent(8.0, -2.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("least affine envelope dominates its samples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> t, m;
  for (int k = 0; k < 40; ++k) {
    t.push_back(0.5 * k);
    m.push_back(3.0 + 0.2 * t.back() + u(rng));
  }
  const auto [a, b] = least_affine_envelope(t, m);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(a + b * t[k] >= m[k] - 1e-12);
  const auto [a0, b0] = least_affine_envelope(t, std::vector<double>(t.size(), 2.0));
  CHECK(a0 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(b0) < 1e-8);
}

TEST_CASE("decay fits recover planted rates") {
  std::vector<double> t, h;
  for (int k = 0; k < 40; ++k) {
    t.push_back(0.25 * k * k);
    h.push_back(0.3 * std::pow(1.0 + t.back(), -0.5));
  }
  const DecayFit alg = decay_fit(t, h, DecayMode::kAlgebraic);
  CHECK(alg.exponent == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::exp(alg.log_constant) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(alg.residual < 1e-10);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(decay_model(alg, t[k]) >= h[k] * (1.0 - 1e-12));

  const double c = 1.7, s = 0.5;
  std::vector<double> hs;
  for (double x : t)
    hs.push_back(0.2 * std::exp(-c * std::pow(1.0 + x, s / (3.0 + s)) * std::pow(std::log1p(x), -3.0 / (3.0 + s))));
  const DecayFit str = decay_fit(t, hs, DecayMode::kStretched, s);
  CHECK(str.exponent == doctest::Approx(c).epsilon(1e-4));
  CHECK(str.power == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(str.log_power == doctest::Approx(6.0 / 7.0).epsilon(1e-15));

  std::vector<double> few_t(t.begin(), t.begin() + 5), few_h(h.begin(), h.begin() + 5);
  CHECK_THROWS_AS(decay_fit(few_t, few_h, DecayMode::kAlgebraic), InsufficientDataError);
  CHECK_THROWS_AS(decay_fit(t, std::vector<double>(t.size(), 0.0), DecayMode::kAlgebraic), InsufficientDataError);
}

TEST_CASE("monitor on a stationary trajectory is a vacuous pass") {
  Trajectory traj;
  traj.gamma = -3.0;
  for (int k = 0; k < 20; ++k) {
    StepDiagnostics d;
    d.time = 0.1 * k;
    traj.diagnostics.push_back(d);
  }
  const MonitorResult m = differential_inequality_monitor(traj, choose_schedule_algebraic(12.0));
  CHECK(m.verdict.holds);
  CHECK(m.verdict.vacuous);
  CHECK_THROWS_AS(differential_inequality_monitor(traj, choose_schedule_stretched(0.5, 0.1)), ConfigError);
}

TEST_CASE("monitor constants make the Gronwall bound dominate a synthetic run") {
  Trajectory traj;
  const Schedule sched = choose_schedule_algebraic(12.0);
  for (int k = 0; k < 200; ++k) {
    StepDiagnostics d;
    d.time = 0.1 * k;
    d.relative_entropy = 0.2 * std::exp(-0.8 * d.time) + 1e-4 * std::pow(1.0 + d.time, -1.0);
    d.dissipation = 0.8 * 0.2 * std::exp(-0.8 * d.time) + 1e-4 * std::pow(1.0 + d.time, -2.0);
    traj.diagnostics.push_back(d);
  }
  const MonitorResult m = differential_inequality_monitor(traj, sched);
  CHECK(std::isfinite(m.c1));
  CHECK(std::isfinite(m.c2));
  CHECK(m.c1 > 0.0);
  CHECK(m.verdict.holds);
  for (std::size_t j = 0; j < m.times.size(); ++j) {
    CHECK(m.dissipation[j] >= m.c1 * std::pow(1.0 + m.times[j], -m.a) * m.relative_entropy[j] -
                                  m.c2 * std::pow(1.0 + m.times[j], -m.b) - 1e-15);
    CHECK(m.bound[j] >= m.relative_entropy[j]);
  }
}
