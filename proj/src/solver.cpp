#include "landau/solver.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/kernel_table.hpp"

namespace landau {

Stepper parse_stepper(const std::string& name) {
  if (name == "euler" || name == "explicit-euler") return Stepper::kEuler;
  if (name == "heun") return Stepper::kHeun;
  throw ConfigError("unknown stepper '" + name + "' (expected euler or heun)");
}

std::string stepper_name(Stepper s) { return s == Stepper::kEuler ? "euler" : "heun"; }

void SolverConfig::validate() const {
  validate_gamma(gamma);
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("final time must be nonnegative");
  if (snapshot_stride < 1) throw ConfigError("snapshot stride must be at least 1");
  if (!(max_relative_change > 0.0)) throw ConfigError("max relative change must be positive");
  VelocityGrid check(half_extent, points_per_axis);
  (void)check;
}

double invariant_drift(const Moments& now, const Moments& reference) {
  const double a[5] = {now.mass, now.momentum[0], now.momentum[1], now.momentum[2], now.energy};
  const double b[5] = {reference.mass, reference.momentum[0], reference.momentum[1], reference.momentum[2],
                       reference.energy};
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return worst;
}

namespace {

std::vector<double> euler_update(const GridDistribution& f, const std::vector<double>& q, double dt) {
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = f[k] + dt * q[k];
  return out;
}

void require_nonnegative(const std::vector<double>& v, double time, double dt) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] < 0.0) {
      std::ostringstream msg;
      msg << "time step " << dt << " at t = " << time << " makes node " << k << " negative (" << v[k]
          << "); retry with a smaller time step";
      throw StepSizeError(msg.str(), time, dt);
    }
  }
}

GridDistribution advance(const CollisionOperator& op, const GridDistribution& f, const std::vector<double>& q,
                         double dt, Stepper stepper, bool project, const Moments& target, double time) {
  std::vector<double> next = euler_update(f, q, dt);
  require_nonnegative(next, time, dt);
  if (stepper == Stepper::kHeun) {
    const GridDistribution stage(f.grid(), std::move(next));
    const std::vector<double> q1 = op.apply(stage);
    next.resize(f.size());
    for (std::size_t k = 0; k < next.size(); ++k) next[k] = f[k] + 0.5 * dt * (q[k] + q1[k]);
    require_nonnegative(next, time, dt);
  }
  if (project) next = project_invariants(f.grid(), next, target);
  return GridDistribution(f.grid(), std::move(next));
}

}  // namespace

StepResult step(const CollisionOperator& op, const GridDistribution& f, double dt, Stepper stepper, bool project,
                const Moments& target) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const auto eval = op.evaluate(f);
  return StepResult{advance(op, f, eval.q, dt, stepper, project, target, 0.0), eval.dissipation};
}

double adaptive_dt(const GridDistribution& f, const std::vector<double>& q, double max_change, double significance) {
  double fmax = 0.0;
  for (double x : f.values()) fmax = std::max(fmax, x);
  const double cutoff = significance * fmax;
  double rate = 0.0;      // max |Q|/f on significant nodes
  double neg_rate = 0.0;  // max -Q/f anywhere
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double fk = f[k];
    if (fk <= 0.0) continue;
    const double r = q[k] / fk;
    if (fk >= cutoff) rate = std::max(rate, std::abs(r));
    neg_rate = std::max(neg_rate, -r);
  }
  double dt = std::numeric_limits<double>::infinity();
  if (rate > 0.0) dt = max_change / rate;
  if (neg_rate > 0.0) dt = std::min(dt, 0.5 / neg_rate);
  return dt;
}

namespace {

StepDiagnostics diagnose(const GridDistribution& f, double time, double dissipation, const Moments& reference,
                         double moment_order) {
  StepDiagnostics d;
  d.time = time;
  d.moments = moments(f);
  d.entropy = entropy(f);
  d.dissipation = dissipation;
  d.relative_entropy = relative_entropy(f);
  d.m5 = moment_poly(f, 5.0);
  d.ml = moment_poly(f, moment_order);
  d.drift_max = invariant_drift(d.moments, reference);
  return d;
}

}  // namespace

Trajectory solve(const GridDistribution& f0, const SolverConfig& config) {
  config.validate();
  const CollisionOperator op(f0.grid(), config.gamma, config.backend);
  const Moments target = moments(f0);
  Trajectory traj;
  traj.gamma = config.gamma;
  traj.moment_order = config.moment_order;

  GridDistribution f = f0;
  double t = 0.0;
  auto eval = op.evaluate(f);
  traj.diagnostics.push_back(diagnose(f, t, eval.dissipation, target, config.moment_order));
  traj.snapshots.push_back({t, f});
  const double h0 = traj.diagnostics.front().entropy;
  double dissipation_sum = 0.0;
  std::size_t steps = 0;
  const double t_eps = 1e-12 * std::max(1.0, config.t_end);

  while (t < config.t_end - t_eps) {
    double dt = config.dt;
    if (config.adaptive) {
      dt = std::min(dt, adaptive_dt(f, eval.q, config.max_relative_change, config.significance));
    }
    dt = std::min(dt, config.t_end - t);
    GridDistribution next = f;
    for (int attempt = 0;; ++attempt) {
      try {
        next = advance(op, f, eval.q, dt, config.stepper, config.conservation_projection, target, t);
        break;
      } catch (const StepSizeError&) {
        if (!config.adaptive || attempt >= 20) throw;
        dt *= 0.5;
      }
    }
    const Moments before = traj.diagnostics.back().moments;
    const double h_before = traj.diagnostics.back().entropy;
    traj.diagnostics.back().dt = dt;
    t += dt;
    ++steps;
    f = std::move(next);
    eval = op.evaluate(f);
    dissipation_sum += dt * eval.dissipation;
    StepDiagnostics d = diagnose(f, t, eval.dissipation, target, config.moment_order);
    d.step_drift = invariant_drift(d.moments, before);
    d.dissipation_sum = dissipation_sum;
    traj.max_step_drift = std::max(traj.max_step_drift, d.step_drift);
    if (d.entropy > h_before + 1e-10) ++traj.entropy_increases;
    traj.max_entropy_inequality_excess = std::max(traj.max_entropy_inequality_excess, d.entropy + dissipation_sum - h0);
    traj.diagnostics.push_back(d);
    const bool last = !(t < config.t_end - t_eps);
    if (steps % static_cast<std::size_t>(config.snapshot_stride) == 0 || last) traj.snapshots.push_back({t, f});
  }
  return traj;
}

}  // namespace landau
