#pragma once

#include <string>
#include <utility>
#include <vector>

#include "landau/inequalities.hpp"
#include "landau/solver.hpp"

namespace landau {

/// Polynomial moment of order `order`, or exponential moment (s, kappa) when `exponential` is set.
struct MomentSpec {
  bool exponential = false;
  double order = 10.0;
  double s = 0.0;
  double kappa = 0.0;

  std::string label() const;
};

/// Samples of one moment along a trajectory with the least affine line
/// dominating them: M(t_j) <= intercept + slope t_j for every sample.
struct MomentEnvelope {
  MomentSpec spec;
  std::vector<double> times;
  std::vector<double> values;
  double intercept = 0.0;
  double slope = 0.0;
  /// Exponent e of the growth bound C l^e for polynomial moments at this gamma
  /// (NaN for exponential moments).
  double slope_exponent = 0.0;
  /// slope / l^e
  double slope_constant = 0.0;
};

/// e in the bound M_l(t) <= C M_l(0) + C l^e t:
/// (l + gamma) / 2 for -2 <= gamma < 0, (l - 6)|gamma + 1| / (gamma + 4) - gamma for -4 < gamma < -2.
double moment_slope_exponent(double l, double gamma);

/// Least affine envelope of (t_j, m_j): minimizes sum_j (A + B t_j - m_j)
/// subject to domination at every sample.
std::pair<double, double> least_affine_envelope(const std::vector<double>& t, const std::vector<double>& m);

std::vector<MomentEnvelope> track_moments(const Trajectory& trajectory, const std::vector<MomentSpec>& specs);

/// M5 along a trajectory against C (1 + t)^{3 / (l - 2)}. The fitted C is the
/// smallest constant that works; the interpolated C comes from
/// M5 <= M2^{(l-5)/(l-2)} M_l^{3/(l-2)} and the affine envelope of M_l.
struct M5Envelope {
  double exponent = 0.0;
  double fitted_constant = 0.0;
  double interpolated_constant = 0.0;
  std::vector<double> times;
  std::vector<double> m5;
};

M5Envelope m5_envelope(const Trajectory& trajectory, double l);

/// Case (i) inequality x(t) + C1 int_0^t x (1+s)^{-a} <= C0 + C2 int_0^t (1+s)^{-b}.
struct GronwallParams {
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double a = 0.5;
  double b = 1.0;

  void validate() const;
};

/// C0 e^{-(E(t) - E(0))} + (C2/C1)(1+t)^{a-b}
///   + (C2/C1) e^{E(t/2) - E(t)} (1 - (1+t/2)^{a-b}) + (C2/C1)(b-a)(t/2)(1+t/2)^{a-b-1},
/// E(t) = C1 (1+t)^{1-a} / (1-a). Accepts 0 <= a < 1 and b > a.
double gronwall_closed_form(const GronwallParams& params, double t);

/// Exact solution of x' = -C1 (1+t)^{-a} x + C2 (1+t)^{-b}, x(0) = C0, through the
/// variation-of-constants integral (adaptive Gauss-Kronrod).
double gronwall_equality_solution(const GronwallParams& params, double t);

/// Stretched-exponential case: A(t) = int_0^t (1+s)^{-3/(3+s)} log(1+s)^q ds with
/// q = -3/(3+s); the source is (1+t)^{s/(3+s)} log(1+t)^q exp(-kappa0 (1+t)^{s/(3+s)} log(1+t)^{-(3+qs)/3}).
struct StretchedGronwallParams {
  double c0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double s = 0.5;
  double kappa0 = 0.5;

  void validate() const;
};

/// C0 e^{-C1 A(t)} + C2 e^{-C1 A(t)} int_0^t e^{C1 A(tau)} source(tau) dtau.
double gronwall_stretched(const StretchedGronwallParams& params, double t);

/// Supremum of admissible decay exponents, l-form (2l^2 - 25l + 57) / (9(l - 2)).
double decay_exponent_l_form(double l);
/// Same quantity in k-form, (k/3)(3k - 1)/(3k + 5) - 2/3 with l = (9 + 3k) / 2.
double decay_exponent_k_form(double k);

enum class DecayMode { kAlgebraic, kStretched };

DecayMode parse_decay_mode(const std::string& name);
std::string decay_mode_name(DecayMode mode);

struct Schedule {
  DecayMode mode = DecayMode::kAlgebraic;
  // algebraic
  double l = 0.0;
  double k = 0.0;
  double nu_low = 0.0;   // 2 / (3k)
  double nu_high = 0.0;  // (3k - 1) / (3 (3k + 5))
  double nu = 0.0;
  double a = 0.0;
  double b = 0.0;
  double beta = 0.0;      // b - a = nu k - 2/3
  double beta_sup = 0.0;  // nu_high k - 2/3
  // stretched
  double s = 0.0;
  double kappa = 0.0;
  double power = 0.0;      // s / (3 + s)
  double log_power = 0.0;  // 3 / (3 + s)
  double q = 0.0;          // -3 / (3 + s)
};

/// R(t) = (1+t)^nu with nu at `position` in (0, 1) across the open window
/// (2/(3k), (3k-1)/(3(3k+5))). Throws ConfigError when l <= 19/2.
Schedule choose_schedule_algebraic(double l, double position = 0.5);
/// Requires 0 < s <= 1/2, kappa > 0, and kappa < 2/e when s = 1/2.
Schedule choose_schedule_stretched(double s, double kappa);

struct DecayFit {
  DecayMode mode = DecayMode::kAlgebraic;
  double exponent = 0.0;   // beta (algebraic) or rate c (stretched)
  double log_constant = 0.0;
  double envelope_constant = 0.0;  // smallest C making C g(t) dominate every sample
  double residual = 0.0;           // weighted RMS in log space
  double s = 0.0;
  double power = 0.0;
  double log_power = 0.0;
  std::size_t samples = 0;
};

/// Weighted least squares of log H against -beta log(1+t) or against
/// -c (1+t)^{s/(3+s)} log(1+t)^{-3/(3+s)}. Sample weights are the trapezoid
/// widths in log(1+t), so early and late times count evenly. Needs at
/// least 10 samples with H > 1e-12 (t > 0 for the stretched form).
DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& h, DecayMode mode, double s = 0.5);
/// Fits H(f|mu) of the stored snapshots.
DecayFit decay_fit(const Trajectory& trajectory, DecayMode mode, double s = 0.5);

double decay_model(const DecayFit& fit, double t);

/// D >= c1 (1+t)^{-a} H - c2 (1+t)^{-b} along the logged steps. c1 is the
/// median of D (1+t)^a / H over steps with H above 1e-12; c2 is the smallest
/// source weight that makes the inequality hold at every step.
struct MonitorResult {
  double a = 0.0;
  double b = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c0 = 0.0;
  std::vector<double> times;
  std::vector<double> relative_entropy;
  std::vector<double> dissipation;
  std::vector<double> bound;  // Gronwall bound with (c0, c1, c2, a, b)
  InequalityVerdict verdict;  // lhs = min(bound - H), rhs = 0
};

MonitorResult differential_inequality_monitor(const Trajectory& trajectory, const Schedule& schedule);

}  // namespace landau
