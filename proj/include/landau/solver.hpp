#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "landau/collision.hpp"
#include "landau/distribution.hpp"

namespace landau {

enum class Stepper { kEuler, kHeun };

Stepper parse_stepper(const std::string& name);
std::string stepper_name(Stepper s);

struct SolverConfig {
  double gamma = -3.0;
  double half_extent = 7.0;
  int points_per_axis = 32;
  /// Fixed step when adaptive is false; upper bound on the step otherwise.
  double dt = 0.05;
  double t_end = 1.0;
  Stepper stepper = Stepper::kHeun;
  bool conservation_projection = true;
  int snapshot_stride = 10;
  bool adaptive = true;
  /// Largest allowed relative nodewise change per step (adaptive mode).
  double max_relative_change = 0.05;
  /// Nodes with f below this fraction of max f are ignored by the
  /// relative-change rule (they still must stay nonnegative).
  double significance = 1e-8;
  /// Order l of the polynomial moment reported in the Ml column.
  double moment_order = 10.0;
  PairBackend backend = PairBackend::kFft;

  void validate() const;
};

struct StepDiagnostics {
  double time = 0.0;
  double dt = 0.0;  // step taken from this state (0 on the last row)
  Moments moments;
  double entropy = 0.0;
  double dissipation = 0.0;
  double relative_entropy = 0.0;
  double m5 = 0.0;
  double ml = 0.0;
  double drift_max = 0.0;       // relative to the initial invariants
  double step_drift = 0.0;      // change of the invariants over the step that produced this state
  double dissipation_sum = 0.0;  // sum over completed steps of dt_n D(f_{n+1})
};

struct TimedSnapshot {
  double time;
  GridDistribution f;
};

struct Trajectory {
  double gamma = 0.0;
  double moment_order = 10.0;
  std::vector<TimedSnapshot> snapshots;
  std::vector<StepDiagnostics> diagnostics;
  std::size_t entropy_increases = 0;  // steps with H_{n+1} > H_n + 1e-10
  double max_step_drift = 0.0;
  double max_entropy_inequality_excess = 0.0;  // max of H_n + sum dt D - H_0
};

/// Largest relative drift of (mass, momentum, energy) from `reference`.
double invariant_drift(const Moments& now, const Moments& reference);

struct StepResult {
  GridDistribution f;
  double dissipation;  // D at the input state
};

/// One explicit step. Throws StepSizeError if any node becomes negative.
/// When `project` is set the result is projected onto `target` invariants.
StepResult step(const CollisionOperator& op, const GridDistribution& f, double dt, Stepper stepper, bool project,
                const Moments& target);

/// Largest step keeping the relative change on significant nodes below
/// `max_change` and every node nonnegative to first order.
double adaptive_dt(const GridDistribution& f, const std::vector<double>& q, double max_change, double significance);

Trajectory solve(const GridDistribution& f0, const SolverConfig& config);

}  // namespace landau
