#include "landau/asymptotics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/kernel_table.hpp"

namespace landau {

namespace {

constexpr double kHugeExponent = 700.0;

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double integrate_kronrod(const std::function<double(double)>& fn, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, lo, hi, 15, 1e-12);
}

/// For integrands with an integrable singularity at the left endpoint.
double integrate_tanh_sinh(const std::function<double(double)>& fn, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(fn, lo, hi, 1e-11);
}

}  // namespace

std::string MomentSpec::label() const {
  std::ostringstream out;
  out.precision(6);
  if (exponential)
    out << "exp_" << s << "_" << kappa;
  else
    out << "poly_" << order;
  return out.str();
}

double moment_slope_exponent(double l, double gamma) {
  validate_gamma(gamma);
  if (gamma >= -2.0) return 0.5 * (l + gamma);
  return (l - 6.0) * std::abs(gamma + 1.0) / (gamma + 4.0) - gamma;
}

std::pair<double, double> least_affine_envelope(const std::vector<double>& t, const std::vector<double>& m) {
  if (t.empty() || t.size() != m.size()) throw InsufficientDataError("envelope needs matching nonempty samples");
  std::vector<std::pair<double, double>> pts;
  for (std::size_t j = 0; j < t.size(); ++j) pts.emplace_back(t[j], m[j]);
  std::sort(pts.begin(), pts.end());
  std::vector<std::pair<double, double>> unique;
  for (const auto& p : pts) {
    if (!unique.empty() && unique.back().first == p.first)
      unique.back().second = std::max(unique.back().second, p.second);
    else
      unique.push_back(p);
  }
  // Upper convex hull; the optimum of the two-variable linear program is an edge of it.
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : unique) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.first - o.first) * (p.second - o.second) - (a.second - o.second) * (p.first - o.first);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  const double n = static_cast<double>(t.size());
  const double t_sum = std::accumulate(t.begin(), t.end(), 0.0);
  double best_a = hull.front().second;
  double best_b = 0.0;
  if (hull.size() >= 2) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
      const double b = (hull[e + 1].second - hull[e].second) / (hull[e + 1].first - hull[e].first);
      const double a = hull[e].second - b * hull[e].first;
      const double objective = n * a + b * t_sum;
      if (objective < best) {
        best = objective;
        best_a = a;
        best_b = b;
      }
    }
  }
  double lift = 0.0;
  for (std::size_t j = 0; j < t.size(); ++j) lift = std::max(lift, m[j] - (best_a + best_b * t[j]));
  return {best_a + lift, best_b};
}

std::vector<MomentEnvelope> track_moments(const Trajectory& trajectory, const std::vector<MomentSpec>& specs) {
  if (trajectory.snapshots.empty()) throw InsufficientDataError("trajectory has no snapshots");
  std::vector<MomentEnvelope> out;
  for (const auto& spec : specs) {
    MomentEnvelope env;
    env.spec = spec;
    for (const auto& snap : trajectory.snapshots) {
      env.times.push_back(snap.time);
      env.values.push_back(spec.exponential ? moment_exp(snap.f, spec.s, spec.kappa) : moment_poly(snap.f, spec.order));
    }
    std::tie(env.intercept, env.slope) = least_affine_envelope(env.times, env.values);
    if (spec.exponential) {
      env.slope_exponent = std::numeric_limits<double>::quiet_NaN();
      env.slope_constant = std::numeric_limits<double>::quiet_NaN();
    } else {
      env.slope_exponent = moment_slope_exponent(spec.order, trajectory.gamma);
      env.slope_constant = env.slope / std::pow(spec.order, env.slope_exponent);
    }
    out.push_back(std::move(env));
  }
  return out;
}

M5Envelope m5_envelope(const Trajectory& trajectory, double l) {
  if (!(l > 5.0)) throw ConfigError("M5 envelope needs l > 5");
  if (trajectory.snapshots.empty()) throw InsufficientDataError("trajectory has no snapshots");
  M5Envelope env;
  env.exponent = 3.0 / (l - 2.0);
  std::vector<double> ml;
  double m2_max = 0.0;
  for (const auto& snap : trajectory.snapshots) {
    env.times.push_back(snap.time);
    env.m5.push_back(moment_poly(snap.f, 5.0));
    ml.push_back(moment_poly(snap.f, l));
    m2_max = std::max(m2_max, moment_poly(snap.f, 2.0));
  }
  for (std::size_t j = 0; j < env.times.size(); ++j)
    env.fitted_constant = std::max(env.fitted_constant, env.m5[j] / std::pow(1.0 + env.times[j], env.exponent));
  const auto [intercept, slope] = least_affine_envelope(env.times, ml);
  const double affine = std::max({intercept, slope, 0.0});
  env.interpolated_constant = std::pow(m2_max, (l - 5.0) / (l - 2.0)) * std::pow(affine, env.exponent);
  return env;
}

void GronwallParams::validate() const {
  if (!(a >= 0.0 && a < 1.0)) throw ConfigError("Gronwall bound needs 0 <= a < 1");
  if (!(b > a)) throw ConfigError("Gronwall bound needs b > a");
  if (!(c1 > 0.0)) throw ConfigError("Gronwall bound needs C1 > 0");
  if (!(c0 >= 0.0 && c2 >= 0.0)) throw ConfigError("Gronwall bound needs C0, C2 >= 0");
}

double gronwall_closed_form(const GronwallParams& p, double t) {
  p.validate();
  if (!(t >= 0.0)) throw ConfigError("Gronwall bound needs t >= 0");
  const auto e = [&](double x) { return p.c1 * std::pow(1.0 + x, 1.0 - p.a) / (1.0 - p.a); };
  const double ratio = p.c2 / p.c1;
  const double gap = p.a - p.b;
  const double half = 0.5 * t;
  return p.c0 * std::exp(-(e(t) - e(0.0))) + ratio * std::pow(1.0 + t, gap) +
         ratio * std::exp(e(half) - e(t)) * (1.0 - std::pow(1.0 + half, gap)) +
         ratio * (p.b - p.a) * half * std::pow(1.0 + half, gap - 1.0);
}

double gronwall_equality_solution(const GronwallParams& p, double t) {
  p.validate();
  const auto e = [&](double x) { return p.c1 * std::pow(1.0 + x, 1.0 - p.a) / (1.0 - p.a); };
  const double et = e(t);
  const double source = integrate_kronrod(
      [&](double tau) { return std::pow(1.0 + tau, -p.b) * std::exp(e(tau) - et); }, 0.0, t);
  return p.c0 * std::exp(-(et - e(0.0))) + p.c2 * source;
}

void StretchedGronwallParams::validate() const {
  if (!(s > 0.0 && s <= 0.5)) throw ConfigError("stretched Gronwall bound needs 0 < s <= 1/2");
  if (!(c1 > 0.0 && kappa0 > 0.0)) throw ConfigError("stretched Gronwall bound needs C1, kappa0 > 0");
  if (!(c0 >= 0.0 && c2 >= 0.0)) throw ConfigError("stretched Gronwall bound needs C0, C2 >= 0");
}

double gronwall_stretched(const StretchedGronwallParams& p, double t) {
  p.validate();
  const double q = -3.0 / (3.0 + p.s);
  const double power = p.s / (3.0 + p.s);
  const auto rate = [&](double tau) {
    const double lg = std::log1p(tau);
    return lg > 0.0 ? std::pow(1.0 + tau, -3.0 / (3.0 + p.s)) * std::pow(lg, q) : 0.0;
  };
  const auto source = [&](double tau) {
    const double lg = std::log1p(tau);
    if (!(lg > 0.0)) return 0.0;
    const double grow = std::pow(1.0 + tau, power);
    return grow * std::pow(lg, q) * std::exp(-p.kappa0 * grow * std::pow(lg, -(3.0 + q * p.s) / 3.0));
  };
  const auto area = [&](double tau) { return integrate_tanh_sinh(rate, 0.0, tau); };
  const double at = area(t);
  const double tail = integrate_tanh_sinh(
      [&](double tau) {
        const double exponent = p.c1 * (area(tau) - at);
        return exponent < -kHugeExponent ? 0.0 : std::exp(exponent) * source(tau);
      },
      0.0, t);
  return p.c0 * std::exp(-p.c1 * at) + p.c2 * tail;
}

double decay_exponent_l_form(double l) { return (2.0 * l * l - 25.0 * l + 57.0) / (9.0 * (l - 2.0)); }

double decay_exponent_k_form(double k) { return (k / 3.0) * (3.0 * k - 1.0) / (3.0 * k + 5.0) - 2.0 / 3.0; }

DecayMode parse_decay_mode(const std::string& name) {
  if (name == "algebraic") return DecayMode::kAlgebraic;
  if (name == "stretched") return DecayMode::kStretched;
  throw ConfigError("unknown decay mode '" + name + "' (expected algebraic or stretched)");
}

std::string decay_mode_name(DecayMode mode) { return mode == DecayMode::kAlgebraic ? "algebraic" : "stretched"; }

Schedule choose_schedule_algebraic(double l, double position) {
  if (!(l > 9.5)) throw ConfigError("algebraic decay needs l > 19/2; the radius window is empty");
  if (!(position > 0.0 && position < 1.0)) throw ConfigError("window position must lie in (0, 1)");
  Schedule s;
  s.mode = DecayMode::kAlgebraic;
  s.l = l;
  s.k = (2.0 * l - 9.0) / 3.0;
  s.nu_low = 2.0 / (3.0 * s.k);
  s.nu_high = (3.0 * s.k - 1.0) / (3.0 * (3.0 * s.k + 5.0));
  if (!(s.nu_low < s.nu_high)) throw ConfigError("radius window is empty for this l");
  s.nu = s.nu_low + position * (s.nu_high - s.nu_low);
  const double shift = 6.0 / (5.0 + 3.0 * s.k);
  s.a = 3.0 * s.nu + shift;
  s.b = 3.0 * s.nu + s.nu * s.k + shift - 2.0 / 3.0;
  s.beta = s.nu * s.k - 2.0 / 3.0;
  s.beta_sup = s.nu_high * s.k - 2.0 / 3.0;
  return s;
}

Schedule choose_schedule_stretched(double s, double kappa) {
  if (!(s > 0.0 && s <= 0.5)) throw ConfigError("stretched decay needs 0 < s <= 1/2");
  if (!(kappa > 0.0)) throw ConfigError("stretched decay needs kappa > 0");
  if (s == 0.5 && !(kappa < 2.0 / std::numbers::e)) throw ConfigError("s = 1/2 needs kappa < 2/e");
  Schedule out;
  out.mode = DecayMode::kStretched;
  out.s = s;
  out.kappa = kappa;
  out.power = s / (3.0 + s);
  out.log_power = 3.0 / (3.0 + s);
  out.q = -3.0 / (3.0 + s);
  return out;
}

namespace {

// Abscissa g(t) with log H ~ log C - c g(t).
double decay_abscissa(DecayMode mode, double t, double s) {
  const double lg = std::log1p(t);
  if (mode == DecayMode::kAlgebraic) return lg;
  return std::pow(1.0 + t, s / (3.0 + s)) * std::pow(lg, -3.0 / (3.0 + s));
}

}  // namespace

DecayFit decay_fit(const std::vector<double>& times, const std::vector<double>& h, DecayMode mode, double s) {
  if (times.size() != h.size()) throw ConfigError("decay fit needs matching samples");
  if (mode == DecayMode::kStretched && !(s > 0.0 && s < 2.0)) throw ConfigError("stretched fit needs s in (0, 2)");
  std::vector<double> x, y, u;
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(h[j] > 1e-12)) continue;
    if (mode == DecayMode::kStretched && !(times[j] > 0.0)) continue;
    x.push_back(decay_abscissa(mode, times[j], s));
    y.push_back(std::log(h[j]));
    u.push_back(std::log1p(times[j]));
  }
  if (x.size() < 10) {
    std::ostringstream msg;
    msg << "decay fit needs at least 10 samples with H(f|mu) > 1e-12; got " << x.size();
    throw InsufficientDataError(msg.str());
  }
  const std::size_t n = x.size();
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = u[j > 0 ? j - 1 : 0];
    const double hi = u[j + 1 < n ? j + 1 : n - 1];
    w[j] = 0.5 * (hi - lo);
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sw += w[j];
    sx += w[j] * x[j];
    sy += w[j] * y[j];
  }
  if (!(sw > 0.0)) throw InsufficientDataError("decay fit samples span no time range");
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += w[j] * (x[j] - mx) * (x[j] - mx);
    sxy += w[j] * (x[j] - mx) * (y[j] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientDataError("decay fit samples have no dynamic range");
  DecayFit fit;
  fit.mode = mode;
  fit.samples = n;
  fit.exponent = -sxy / sxx;
  fit.log_constant = my + fit.exponent * mx;
  if (mode == DecayMode::kStretched) {
    fit.s = s;
    fit.power = s / (3.0 + s);
    fit.log_power = 3.0 / (3.0 + s);
  }
  double rss = 0.0;
  double lift = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = y[j] - (fit.log_constant - fit.exponent * x[j]);
    rss += w[j] * r * r;
    lift = std::max(lift, y[j] + fit.exponent * x[j]);
  }
  fit.residual = std::sqrt(rss / sw);
  fit.envelope_constant = std::exp(lift);
  return fit;
}

DecayFit decay_fit(const Trajectory& trajectory, DecayMode mode, double s) {
  std::vector<double> t, h;
  for (const auto& snap : trajectory.snapshots) {
    t.push_back(snap.time);
    h.push_back(relative_entropy(snap.f));
  }
  return decay_fit(t, h, mode, s);
}

double decay_model(const DecayFit& fit, double t) {
  return fit.envelope_constant * std::exp(-fit.exponent * decay_abscissa(fit.mode, t, fit.s));
}

MonitorResult differential_inequality_monitor(const Trajectory& trajectory, const Schedule& schedule) {
  if (schedule.mode != DecayMode::kAlgebraic) throw ConfigError("the monitor uses the algebraic schedule");
  if (trajectory.diagnostics.empty()) throw InsufficientDataError("trajectory has no diagnostics");
  MonitorResult r;
  r.a = schedule.a;
  r.b = schedule.b;
  r.c0 = trajectory.diagnostics.front().relative_entropy;
  std::vector<double> rates;
  for (const auto& d : trajectory.diagnostics) {
    r.times.push_back(d.time);
    r.relative_entropy.push_back(d.relative_entropy);
    r.dissipation.push_back(d.dissipation);
    if (d.relative_entropy > 1e-12) rates.push_back(d.dissipation * std::pow(1.0 + d.time, r.a) / d.relative_entropy);
  }
  if (rates.empty()) {
    r.verdict = make_verdict("differential_inequality", 0.0, 0.0, 0.0);
    r.verdict.vacuous = true;
    r.verdict.note = "relative entropy is below 1e-12 throughout (equilibrium)";
    r.bound.assign(r.times.size(), r.c0);
    return r;
  }
  r.c1 = std::max(median(rates), std::numeric_limits<double>::min());
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    const double need = r.c1 * std::pow(1.0 + r.times[j], -r.a) * r.relative_entropy[j] - r.dissipation[j];
    r.c2 = std::max(r.c2, need * std::pow(1.0 + r.times[j], r.b));
  }
  const GronwallParams gp{r.c0, r.c1, r.c2, r.a, r.b};
  double margin = std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    r.bound.push_back(gronwall_closed_form(gp, r.times[j]));
    margin = std::min(margin, r.bound[j] - r.relative_entropy[j]);
    worst_ratio = std::max(worst_ratio, r.relative_entropy[j] / r.bound[j]);
  }
  r.verdict = make_verdict("differential_inequality", margin, 0.0, 0.0);
  r.verdict.empirical_constant = r.c1;
  r.verdict.details = {{"a", r.a}, {"b", r.b}, {"c0", r.c0}, {"c1", r.c1}, {"c2", r.c2},
                       {"max_h_over_bound", worst_ratio}};
  r.verdict.note = "lhs = min over steps of (Gronwall bound - H(f|mu))";
  return r;
}

}  // namespace landau
