#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "landau/asymptotics.hpp"
#include "landau/collision.hpp"
#include "landau/commands.hpp"
#include "landau/distribution.hpp"
#include "landau/functionals.hpp"
#include "landau/inequalities.hpp"
#include "landau/run_config.hpp"
#include "landau/solver.hpp"

using namespace landau;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

/// Corpus used by criteria 1, 3 and 4.
struct SharedCorpus {
  Corpus c32;
  std::vector<MemberMetrics> m32;
};

Outcome dissipation_forms(const SharedCorpus& shared) {
  double worst = 0.0;
  const std::size_t n = std::min<std::size_t>(20, shared.c32.members.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = shared.c32.members[k];
    const double p = entropy_dissipation_projection(f, -3.0);
    const double x = entropy_dissipation_crossform(f, -3.0);
    worst = std::max(worst, std::abs(p - x) / std::abs(p));
  }
  return {n == 20 && worst <= 1e-10, std::to_string(n) + " members, max rel diff " + fmt("%.3e", worst) + " (tol 1e-10)"};
}

Outcome equilibrium_annihilation() {
  constexpr double kRoundoffFloor = 1e-12;
  std::array<std::array<double, 4>, 2> values{};
  const int sizes[2] = {24, 48};
  for (int s = 0; s < 2; ++s) {
    const GridDistribution mu = reduced_maxwellian(VelocityGrid(7.0, sizes[s]));
    const auto q = collision_operator(mu, -3.0, PairBackend::kFft);
    double qmax = 0.0;
    for (double x : q) qmax = std::max(qmax, std::abs(x));
    values[s] = {std::abs(entropy_dissipation_projection(mu, -3.0)), std::abs(fisher_weighted(mu, -3.0)),
                 std::abs(relative_entropy(mu)), qmax};
  }
  const char* names[4] = {"D", "I_-3", "H", "max|Q|"};
  bool pass = true;
  std::ostringstream d;
  for (int i = 0; i < 4; ++i) {
    const double v24 = values[0][i], v48 = values[1][i];
    pass = pass && v48 <= 1e-6;
    d << names[i] << "=" << fmt("%.2e", v48);
    if (v24 > kRoundoffFloor) {
      const double order = std::log2(v24 / std::max(v48, 1e-300));
      pass = pass && order >= 1.5;
      d << " (order " << fmt("%.2f", order) << ") ";
    } else {
      d << " (roundoff floor) ";
    }
  }
  d << "at N=48, tol 1e-6, order >= 1.5";
  return {pass, d.str()};
}

double min_cercignani_ratio(std::span<const MemberMetrics> metrics) {
  double best = INFINITY;
  for (const auto& m : metrics)
    if (m.fisher_m3 > kEquilibriumFisher) best = std::min(best, m.dissipation * m.m5 / m.fisher_m3);
  return best;
}

Outcome cercignani_ratio(const SharedCorpus& shared) {
  const Corpus c48 = random_corpus(VelocityGrid(7.0, 48), 1, 50, 0.0);
  const auto m48 = corpus_metrics(c48.members, -3.0, PairBackend::kFft);
  const double r32 = min_cercignani_ratio(shared.m32);
  const double r48 = min_cercignani_ratio(m48);
  const double change = std::abs(r48 - r32) / r32;
  const bool pass = shared.m32.size() == 50 && m48.size() == 50 && r32 > 0.0 && r48 > 0.0 && std::isfinite(r32) &&
                    change < 0.2;
  return {pass, "min D M5 / I_-3: N=32 " + fmt("%.4e", r32) + ", N=48 " + fmt("%.4e", r48) + ", change " +
                    fmt("%.2f%%", 100.0 * change) + " (tol 20%)"};
}

Outcome explicit_constants(const SharedCorpus& shared) {
  std::ostringstream d;
  const double at3 = hessian_min_eigenvalue({std::sqrt(3.0), 0.0, 0.0});
  const bool hess_ok = std::abs(at3 - 0.625) <= 1e-12 && check_bakry_emery(10000, 1).holds;
  d << "hess(|v|^2=3)-5/8=" << fmt("%.1e", at3 - 0.625);

  const double dlb = delta_lower_bound(0.0);
  double delta_min = INFINITY, zmin = INFINITY, zmax = 0.0, slack_min = INFINITY;
  for (const auto& m : shared.m32) {
    delta_min = std::min(delta_min, m.delta);
    zmin = std::min({zmin, m.z1, m.z2});
    zmax = std::max({zmax, m.z1, m.z2});
    const auto v = check_prop32(m);
    if (!v.vacuous) slack_min = std::min(slack_min, v.lhs - v.rhs);
  }
  const bool delta_ok = delta_min >= dlb;
  const bool z_ok = zmin >= std::pow(2.0, -5.5) && zmax <= 1.0;
  const bool p32_ok = slack_min > 0.0;
  const auto bf = check_b_field_consistency(-3.0, 1000, 1);
  d << ", min Delta " << fmt("%.3e", delta_min) << " >= " << fmt("%.3e", dlb) << ", Z in [" << fmt("%.4f", zmin)
    << ", " << fmt("%.4f", zmax) << "], prop32 min slack " << fmt("%.3e", slack_min) << ", b-field rel err "
    << fmt("%.1e", bf.rhs) << " (tol 1e-6)";
  return {hess_ok && delta_ok && z_ok && p32_ok && bf.holds, d.str()};
}

Outcome score_reconstruction() {
  const double t[3] = {1.5, 1.0, 0.5};
  const GridDistribution f = anisotropic_gaussian(VelocityGrid(7.0, 48), t[0], t[1], t[2]);
  double worst = 0.0;
  int pairs = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const ScoreReconstruction r = reconstruct_score(f, i, j);
      if (r.degenerate) continue;
      std::vector<double> exact(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) {
        const Vec3 v = f.grid().node(k);
        exact[k] = v[i] * v[j] * (1.0 / t[i] - 1.0 / t[j]);
      }
      worst = std::max(worst, masked_relative_error(f, r.rotation, exact, 1e-8));
      ++pairs;
    }
  return {pairs == 3 && worst <= 1e-3,
          std::to_string(pairs) + " pairs, max rel err " + fmt("%.3e", worst) + " at N=48 (tol 1e-3)"};
}

SolverConfig run_config(bool projection) {
  SolverConfig c;
  c.gamma = -3.0;
  c.half_extent = 7.0;
  c.points_per_axis = 32;
  c.dt = 0.05;
  c.t_end = 20.0;
  c.conservation_projection = projection;
  c.snapshot_stride = 10;
  c.moment_order = 12.0;
  return c;
}

GridDistribution bimaxwellian_start() { return gaussian_mixture(VelocityGrid(7.0, 32), bimaxwellian_parameters(1.0)); }

Outcome solver_structure(const Trajectory& with, const Trajectory& without) {
  double total_without = 0.0;
  for (const auto& d : without.diagnostics) total_without = std::max(total_without, d.drift_max);
  double h_rise = 0.0;
  for (const Trajectory* t : {&with, &without})
    for (std::size_t n = 1; n < t->diagnostics.size(); ++n)
      h_rise = std::max(h_rise, t->diagnostics[n].entropy - t->diagnostics[n - 1].entropy);
  const double excess = std::max(with.max_entropy_inequality_excess, without.max_entropy_inequality_excess);
  const bool pass = with.max_step_drift <= 1e-13 && total_without <= 1e-10 && with.entropy_increases == 0 &&
                    without.entropy_increases == 0 && excess <= 1e-8;
  return {pass, "step drift " + fmt("%.2e", with.max_step_drift) + " (tol 1e-13), unprojected drift " +
                    fmt("%.2e", total_without) + " (tol 1e-10), max H rise " + fmt("%.2e", h_rise) +
                    ", entropy inequality excess " + fmt("%.2e", excess) + " (tol 1e-8), t_end " +
                    fmt("%g", with.snapshots.back().time)};
}

Outcome moment_propagation(const Trajectory& t) {
  const auto env = track_moments(t, {{false, 10.0, 0.0, 0.0}}).front();
  double slack = INFINITY;
  for (std::size_t j = 0; j < env.times.size(); ++j)
    slack = std::min(slack, env.intercept + env.slope * env.times[j] - env.values[j]);
  const bool m10_ok = std::isfinite(env.slope) && slack >= -1e-12 * (1.0 + std::abs(env.intercept));
  const M5Envelope m5 = m5_envelope(t, 12.0);
  double m5_slack = INFINITY;
  for (std::size_t j = 0; j < m5.times.size(); ++j)
    m5_slack = std::min(m5_slack, m5.fitted_constant * std::pow(1.0 + m5.times[j], m5.exponent) - m5.m5[j]);
  const bool m5_ok = std::isfinite(m5.fitted_constant) && m5_slack >= -1e-12 * (1.0 + m5.fitted_constant);
  return {m10_ok && m5_ok, "M10 <= " + fmt("%.4g", env.intercept) + " + " + fmt("%.4g", env.slope) +
                               " t, M5 <= " + fmt("%.4g", m5.fitted_constant) + " (1+t)^" +
                               fmt("%.4f", m5.exponent) + " over " + std::to_string(env.times.size()) + " snapshots"};
}

std::vector<double> equality_ode(const GronwallParams& p, const std::vector<double>& times) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 1>;
  State x{p.c0};
  std::vector<double> out;
  auto rhs = [&](const State& s, State& ds, double t) {
    ds[0] = -p.c1 * std::pow(1.0 + t, -p.a) * s[0] + p.c2 * std::pow(1.0 + t, -p.b);
  };
  auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3,
                          [&](const State& s, double) { out.push_back(s[0]); });
  return out;
}

double loglog_slope(const std::function<double(double)>& x, double t) {
  return (std::log(x(t * 1.01)) - std::log(x(t))) / (std::log1p(t * 1.01) - std::log1p(t));
}

Outcome gronwall_machinery() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> times{0.0};
  for (int k = 1; k <= 60; ++k) times.push_back(std::expm1(std::log1p(200.0) * k / 60.0));
  double worst_dom = INFINITY;
  double worst_slope = 0.0;
  int in_regime = 0;
  for (int trial = 0; trial < 20; ++trial) {
    GronwallParams p;
    p.a = 0.05 + 0.9 * u(rng);
    p.b = p.a + 0.05 + 1.5 * u(rng);
    p.c0 = 0.1 + 2.0 * u(rng);
    p.c1 = 0.1 + 3.0 * u(rng);
    p.c2 = 0.1 + 3.0 * u(rng);
    const auto ode = equality_ode(p, times);
    for (std::size_t j = 0; j < times.size(); ++j)
      worst_dom = std::min(worst_dom, gronwall_closed_form(p, times[j]) / ode[j] - 1.0);
    const double target = -(p.b - p.a);
    const double exact = loglog_slope([&](double t) { return gronwall_equality_solution(p, t); }, 1e6);
    if (std::abs(exact / target - 1.0) > 0.01) continue;
    ++in_regime;
    const double bound = loglog_slope([&](double t) { return gronwall_closed_form(p, t); }, 1e6);
    worst_slope = std::max(worst_slope, std::abs(bound / target - 1.0));
  }
  double worst_form = 0.0;
  for (double l : {10.0, 12.0, 15.0, 20.0})
    worst_form = std::max(worst_form, std::abs(decay_exponent_l_form(l) - decay_exponent_k_form((2.0 * l - 9.0) / 3.0)));
  const double at12 = decay_exponent_l_form(12.0);
  const bool pass = worst_dom >= -1e-9 && in_regime >= 10 && worst_slope <= 0.01 && worst_form <= 1e-12 &&
                    std::abs(at12 - 0.5) <= 1e-15;
  return {pass, "min bound/ode - 1 " + fmt("%.3e", worst_dom) + " over 20 sets, slope err " +
                    fmt("%.2e", worst_slope) + " on " + std::to_string(in_regime) +
                    " sets in their power-law regime at 1e6 (tol 1%), l/k forms " + fmt("%.1e", worst_form) +
                    ", beta_sup(12) = " + fmt("%.17g", at12)};
}

Outcome decay_envelope(const Trajectory& t) {
  const Schedule schedule = choose_schedule_algebraic(12.0, 0.5);
  const MonitorResult monitor = differential_inequality_monitor(t, schedule);
  const DecayFit fit = decay_fit(t, DecayMode::kAlgebraic);
  const bool pass = monitor.verdict.holds && !monitor.verdict.vacuous && fit.exponent > schedule.beta_sup;
  return {pass, "min(bound - H) " + fmt("%.3e", monitor.verdict.lhs) + " with c1 " + fmt("%.3g", monitor.c1) +
                    ", c2 " + fmt("%.3g", monitor.c2) + "; fitted beta " + fmt("%.4f", fit.exponent) +
                    " vs beta_sup " + fmt("%.4f", schedule.beta_sup)};
}

std::vector<std::pair<std::string, std::string>> tree_contents(const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out.emplace_back(fs::relative(e.path(), root).string(),
                     std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "landau_acceptance";
  fs::remove_all(base);
  std::vector<RunConfig> runs;
  RunConfig verify;
  verify.command = "verify";
  verify.points = 16;
  verify.count = 8;
  verify.inner_points = 10;
  verify.bakry_samples = 2000;
  runs.push_back(verify);
  RunConfig solve_run;
  solve_run.command = "solve";
  solve_run.points = 16;
  solve_run.t_end = 4.0;
  solve_run.stride = 2;
  runs.push_back(solve_run);
  RunConfig decay = solve_run;
  decay.command = "decay";
  runs.push_back(decay);

  std::size_t files = 0;
  bool pass = true;
  std::string mismatch;
  std::ostringstream sink;
  for (RunConfig c : runs) {
    c.output = base / c.command;
    if (c.command == "decay") c.input = base / "solve";
    std::vector<std::pair<std::string, std::string>> trees[2];
    int codes[2] = {0, 0};
    for (int rep = 0; rep < 2; ++rep) {
      fs::remove_all(c.output);
      codes[rep] = run_command(c, sink, sink);
      trees[rep] = tree_contents(c.output);
    }
    files += trees[0].size();
    if (codes[0] > 1 || codes[0] != codes[1]) {
      pass = false;
      mismatch = c.command + " exited " + std::to_string(codes[0]) + " then " + std::to_string(codes[1]);
    } else if (trees[0] != trees[1]) {
      pass = false;
      mismatch = c.command + " outputs differ";
    }
  }
  fs::remove_all(base);
  return {pass && files > 0,
          "verify/solve/decay rerun, " + std::to_string(files) + " files compared" + (mismatch.empty() ? "" : ": " + mismatch)};
}

void report(int number, const char* name, const Outcome& o, double seconds) {
  std::printf("criterion %2d %-28s %s  %s  [%.0fs]\n", number, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds);
  std::fflush(stdout);
}

template <class F>
bool timed(int number, const char* name, F&& fn) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  report(number, name, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return o.pass;
}

}  // namespace

/// Runs every criterion, or only the numbers given on the command line.
int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty())
    for (int n = 1; n <= 10; ++n) selected.push_back(n);
  const auto wanted = [&](int n) { return std::find(selected.begin(), selected.end(), n) != selected.end(); };

  SharedCorpus shared;
  if (wanted(1) || wanted(3) || wanted(4)) {
    shared.c32 = random_corpus(VelocityGrid(7.0, 32), 1, 50, 0.0);
    shared.m32 = corpus_metrics(shared.c32.members, -3.0, PairBackend::kFft);
  }
  Trajectory with, without;
  bool solved = false;
  const auto need_trajectory = [&]() -> Trajectory& {
    if (!solved) {
      with = solve(bimaxwellian_start(), run_config(true));
      solved = true;
    }
    return with;
  };

  int failures = 0, run = 0;
  const auto criterion = [&](int n, const char* name, const std::function<Outcome()>& fn) {
    if (!wanted(n)) return;
    ++run;
    failures += !timed(n, name, fn);
  };
  criterion(1, "dissipation_forms", [&] { return dissipation_forms(shared); });
  criterion(2, "equilibrium_annihilation", [] { return equilibrium_annihilation(); });
  criterion(3, "cercignani_ratio", [&] { return cercignani_ratio(shared); });
  criterion(4, "explicit_constants", [&] { return explicit_constants(shared); });
  criterion(5, "score_reconstruction", [] { return score_reconstruction(); });
  criterion(6, "solver_structure", [&] {
    const Trajectory& t = need_trajectory();
    without = solve(bimaxwellian_start(), run_config(false));
    return solver_structure(t, without);
  });
  criterion(7, "moment_propagation", [&] { return moment_propagation(need_trajectory()); });
  criterion(8, "gronwall_machinery", [] { return gronwall_machinery(); });
  criterion(9, "decay_envelope", [&] { return decay_envelope(need_trajectory()); });
  criterion(10, "determinism", [] { return determinism(); });

  std::printf("%d of %d criteria passed\n", run - failures, run);
  return failures == 0 ? 0 : 1;
}
