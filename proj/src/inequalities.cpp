#include "landau/inequalities.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "landau/error.hpp"
#include "landau/fft_convolver.hpp"
#include "landau/kernel_table.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

double bracket2(const Vec3& v) { return 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sup_offdiag_sq(const Mat3& p) {
  return std::max({p[0][1] * p[0][1], p[0][2] * p[0][2], p[1][2] * p[1][2]});
}

double sup_diag_gap(const Mat3& p) {
  return std::max({std::abs(p[0][0] - p[1][1]), std::abs(p[0][0] - p[2][2]), std::abs(p[1][1] - p[2][2])});
}

double sup_diag_unit(const Mat3& p) {
  return std::max({std::abs(p[0][0] - 1.0), std::abs(p[1][1] - 1.0), std::abs(p[2][2] - 1.0)});
}

bool is_equilibrium(const MemberMetrics& m) { return m.fisher_m3 < kEquilibriumFisher; }

std::string member_key(const char* prefix, std::size_t k) { return std::string(prefix) + "_" + std::to_string(k); }

// sup_{t >= 1} t^m exp(-c t^s) for m >= 0, c > 0, s > 0.
double power_exp_sup(double m, double c, double s) {
  const double t = std::max(1.0, std::pow(m / (c * s), 1.0 / s));
  return std::pow(t, m) * std::exp(-c * std::pow(t, s));
}

// Rotation-type integrals int R_ij(v, w) f(w) g(w) dw for g in {1, w_i, w_j}.
struct PairMoments {
  double g0 = 0.0, si = 0.0, sj = 0.0, wi = 0.0, wj = 0.0, wisj = 0.0, wjsi = 0.0;
};

}  // namespace

InequalityVerdict make_verdict(std::string name, double lhs, double rhs, double tolerance) {
  InequalityVerdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.tolerance = tolerance;
  v.holds = std::isfinite(lhs) && std::isfinite(rhs) && lhs >= rhs - tolerance;
  return v;
}

std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

InequalityVerdict combine_verdicts(const std::string& name, std::span<const InequalityVerdict> parts) {
  InequalityVerdict out;
  out.name = name;
  out.vacuous = true;
  out.holds = true;
  double least = std::numeric_limits<double>::infinity();
  double constant = std::numeric_limits<double>::infinity();
  std::size_t failures = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& p = parts[k];
    out.details.emplace_back(member_key("slack", k), p.lhs - p.rhs);
    if (p.vacuous) continue;
    out.vacuous = false;
    if (!p.holds) {
      out.holds = false;
      ++failures;
    }
    constant = std::min(constant, p.empirical_constant);
    const double slack = p.lhs - p.rhs + p.tolerance;
    if (slack < least) {
      least = slack;
      out.lhs = p.lhs;
      out.rhs = p.rhs;
      out.tolerance = p.tolerance;
      out.inputs_digest = p.inputs_digest;
    }
  }
  out.empirical_constant = out.vacuous ? 0.0 : constant;
  out.note = std::to_string(parts.size()) + " parts, " + std::to_string(failures) + " failing";
  return out;
}

MemberMetrics member_metrics(const GridDistribution& f, double gamma, PairBackend backend) {
  MemberMetrics m;
  m.entropy = entropy(f);
  m.relative_entropy = relative_entropy(f);
  m.dissipation = entropy_dissipation(f, gamma, backend);
  m.m5 = moment_poly(f, 5.0);
  m.fisher_m3 = fisher_weighted(f, -3.0);
  m.pressure = pressure_tensor(f);
  m.delta = delta_f(m.pressure);
  m.l3_norm = lp_norm_weighted(f, 3.0, -3.0);
  const PartitionPair z = partition_functions(f, -3.0);
  m.z1 = z.z1;
  m.z2 = z.z2;
  return m;
}

std::vector<MemberMetrics> corpus_metrics(std::span<const GridDistribution> members, double gamma,
                                          PairBackend backend) {
  std::vector<MemberMetrics> out;
  out.reserve(members.size());
  for (const auto& f : members) out.push_back(member_metrics(f, gamma, backend));
  return out;
}

InequalityVerdict check_theorem_entropy(std::span<const MemberMetrics> metrics, const std::string& digest) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  std::vector<std::pair<std::string, double>> details;
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    const auto& m = metrics[k];
    details.emplace_back(member_key("entropy", k), m.entropy);
    if (is_equilibrium(m)) {
      details.emplace_back(member_key("ratio", k), std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = m.dissipation * m.m5 / m.fisher_m3;
    details.emplace_back(member_key("ratio", k), ratio);
    best = std::min(best, ratio);
    ++used;
  }
  InequalityVerdict v;
  if (used == 0) {
    v = make_verdict("theorem_entropy", 0.0, 0.0, 0.0);
    v.vacuous = true;
    v.note = "every member is at equilibrium (I_-3 below 1e-12); nothing to bound";
  } else {
    v = make_verdict("theorem_entropy", best, kTiny, 0.0);
    v.empirical_constant = best;
    v.note = "min of D M5 / I_-3 over " + std::to_string(used) + " members, " +
             std::to_string(metrics.size() - used) + " skipped as equilibrium";
  }
  v.inputs_digest = digest;
  v.details = std::move(details);
  return v;
}

InequalityVerdict check_theorem_entropy(const Corpus& corpus, double gamma, PairBackend backend) {
  if (corpus.members.empty()) throw InsufficientDataError("empty corpus");
  const auto metrics = corpus_metrics(corpus.members, gamma, backend);
  return check_theorem_entropy(metrics, digest_hex(corpus_digest(corpus.members)));
}

namespace {

struct WeightedEntropy {
  double value = 0.0;
  double min_integrand = 0.0;
};

WeightedEntropy weighted_relative_entropy_parts(const GridDistribution& f) {
  const PartitionPair z = partition_functions(f, -3.0);
  const Maxwellian mu{};
  const double shift = std::log(z.z1 / z.z2);
  const double ratio = z.z2 / z.z1;
  const auto integrand = [&](std::size_t k, const Vec3& v) {
    const double m = mu(v);
    const double x = f[k];
    const double log_term = x < kEntropyCutoff ? 0.0 : x * (shift + std::log(x) - mu.log_value(v));
    return (log_term + ratio * m - x) * std::pow(bracket2(v), -1.5);
  };
  WeightedEntropy out;
  out.value = node_integral(f.grid(), integrand);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.size(); ++k) lowest = std::min(lowest, integrand(k, f.grid().node(k)));
  out.min_integrand = lowest;
  return out;
}

}  // namespace

double weighted_relative_entropy(const GridDistribution& f) { return weighted_relative_entropy_parts(f).value; }

double truncated_entropy_bound(const GridDistribution& f, double radius) {
  const Maxwellian mu{};
  const double r2 = radius * radius;
  const double tail = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double b2 = bracket2(v);
    if (b2 < r2) return 0.0;
    const double x = f[k];
    const double flogf = x < kEntropyCutoff ? 0.0 : x * std::log(x);
    return flogf + kTailConstant * b2 * x + kTailConstant * mu(v);
  });
  return relative_entropy(f) - tail;
}

std::vector<InequalityVerdict> check_cercignani(const GridDistribution& f, double radius, double gamma,
                                                PairBackend backend) {
  if (!(radius > 1.0)) throw ConfigError("Cercignani check needs R > 1");
  const double d = entropy_dissipation(f, gamma, backend);
  const double m5 = moment_poly(f, 5.0);
  const WeightedEntropy w = weighted_relative_entropy_parts(f);
  const double digest_scale = 1e-14;
  std::vector<InequalityVerdict> out;

  InequalityVerdict ratio = make_verdict("cercignani_weighted", std::min(d * m5, w.min_integrand), 0.0, digest_scale);
  ratio.details = {{"dissipation", d}, {"m5", m5}, {"weighted_entropy", w.value}, {"min_integrand", w.min_integrand}};
  if (w.value > 1e-14) {
    ratio.empirical_constant = d * m5 / w.value;
    ratio.note = "lhs = min(D M5, smallest nodewise integrand); constant = D M5 / W";
  } else {
    ratio.vacuous = true;
    ratio.note = "weighted relative entropy vanishes (equilibrium)";
  }
  out.push_back(std::move(ratio));

  const double bound = truncated_entropy_bound(f, radius);
  InequalityVerdict tail = make_verdict("cercignani_truncated", w.value, std::pow(radius, -3.0) * bound, 1e-14);
  tail.details = {{"radius", radius}, {"bracket", bound}, {"relative_entropy", relative_entropy(f)}};
  tail.note = "W >= R^-3 (H(f|mu) - tail terms)";
  out.push_back(std::move(tail));

  const PartitionPair z = partition_functions(f, -3.0);
  const double floor = std::pow(2.0, -5.5);
  const double margin = std::min({z.z1 - floor, 1.0 - z.z1, z.z2 - floor, 1.0 - z.z2});
  InequalityVerdict zb = make_verdict("partition_bounds", margin, 0.0, 0.0);
  zb.details = {{"z1", z.z1}, {"z2", z.z2}, {"lower", floor}};
  zb.note = "lhs = smallest margin of 2^-11/2 <= Z1, Z2 <= 1";
  out.push_back(std::move(zb));
  return out;
}

InequalityVerdict check_l3_regularity(std::span<const MemberMetrics> metrics, const std::string& digest) {
  if (metrics.empty()) throw InsufficientDataError("empty corpus");
  double worst = 0.0;
  std::vector<std::pair<std::string, double>> details;
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    const double ratio = metrics[k].l3_norm / (1.0 + metrics[k].dissipation);
    details.emplace_back(member_key("ratio", k), ratio);
    worst = std::max(worst, ratio);
  }
  InequalityVerdict v = make_verdict("l3_regularity", worst, worst, 0.0);
  v.empirical_constant = worst;
  v.inputs_digest = digest;
  v.note = "C0 = max ||f||_{L^3_-3} / (1 + D); holds when finite";
  v.details = std::move(details);
  return v;
}

ScoreReconstruction reconstruct_score(const GridDistribution& f, int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2) throw ConfigError("reconstruction needs distinct axes in {0, 1, 2}");
  const auto& grid = f.grid();
  const auto& s = f.score();
  const Mat3 p = pressure_tensor(f);
  ScoreReconstruction out;
  out.i = i;
  out.j = j;
  const double den = p[i][j] * p[i][j] - p[i][i] * p[j][j];
  if (std::abs(den) < 1e-8) {
    out.degenerate = true;
    return out;
  }

  const auto moments_for = [&](int weight_axis) {
    const auto g = [&](const Vec3& v) { return weight_axis < 0 ? 1.0 : v[weight_axis]; };
    PairMoments m;
    m.g0 = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v); });
    m.si = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * s[i][k]; });
    m.sj = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * s[j][k]; });
    m.wi = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * v[i]; });
    m.wj = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * v[j]; });
    m.wisj = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * v[i] * s[j][k]; });
    m.wjsi = node_integral(grid, [&](std::size_t k, const Vec3& v) { return f[k] * g(v) * v[j] * s[i][k]; });
    return m;
  };
  const PairMoments m1 = moments_for(-1);
  const PairMoments mi = moments_for(i);
  const PairMoments mj = moments_for(j);

  // int R_ij(v, w) f(w) g(w) dw with R expanded in v and w.
  const auto rotation = [&](const PairMoments& m, const Vec3& v, double si, double sj) {
    return v[i] * sj * m.g0 - v[i] * m.sj - sj * m.wi + m.wisj - v[j] * si * m.g0 + v[j] * m.si + si * m.wj -
           m.wjsi;
  };

  const std::size_t n = f.size();
  out.score_i.resize(n);
  out.score_j.resize(n);
  out.rotation.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 v = grid.node(k);
    const double si = s[i][k];
    const double sj = s[j][k];
    const double xi = rotation(mi, v, si, sj);
    const double xj = rotation(mj, v, si, sj);
    out.rotation[k] = rotation(m1, v, si, sj);
    out.score_i[k] = (v[j] * p[i][j] + v[i] * p[i][i] + p[i][j] * xi - p[i][i] * xj) / den;
    out.score_j[k] = (v[i] * p[i][j] + v[j] * p[j][j] + p[j][j] * xi - p[i][j] * xj) / den;
  }
  return out;
}

double masked_relative_error(const GridDistribution& f, std::span<const double> a, std::span<const double> b,
                             double threshold) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (!f.grid().is_interior(k) || !(f[k] > threshold)) continue;
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max(scale, std::abs(b[k]));
  }
  return scale < 1e-12 ? diff : diff / scale;
}

InequalityVerdict check_prop31(const GridDistribution& f, double tolerance) {
  const auto& s = f.score();
  double worst = 0.0;
  std::size_t used = 0;
  std::vector<std::pair<std::string, double>> details;
  std::string skipped;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const ScoreReconstruction r = reconstruct_score(f, i, j);
      const std::string tag = std::to_string(i + 1) + std::to_string(j + 1);
      if (r.degenerate) {
        skipped += (skipped.empty() ? "" : ", ") + tag;
        continue;
      }
      std::vector<double> direct(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) {
        const Vec3 v = f.grid().node(k);
        direct[k] = v[i] * s[j][k] - v[j] * s[i][k];
      }
      const double ei = masked_relative_error(f, r.score_i, s[i]);
      const double ej = masked_relative_error(f, r.score_j, s[j]);
      const double er = masked_relative_error(f, r.rotation, direct);
      details.emplace_back("score_i_error_" + tag, ei);
      details.emplace_back("score_j_error_" + tag, ej);
      details.emplace_back("rotation_error_" + tag, er);
      worst = std::max({worst, ei, ej, er});
      ++used;
    }
  InequalityVerdict v = make_verdict("prop31_reconstruction", tolerance, worst, 0.0);
  v.empirical_constant = worst;
  v.details = std::move(details);
  if (used == 0) {
    v.vacuous = true;
    v.note = "every pair has a near-degenerate determinant";
  } else if (!skipped.empty()) {
    v.note = "skipped pairs with |P_ij^2 - P_ii P_jj| < 1e-8: " + skipped;
  }
  return v;
}

InequalityVerdict check_prop32(const MemberMetrics& m) {
  const double offdiag = sup_offdiag_sq(m.pressure);
  const double diag = std::pow(sup_diag_unit(m.pressure), 2);
  const double md = m.m5 * m.dissipation;
  const double inv_delta2 = 1.0 / (m.delta * m.delta);
  const double bound = kProp32Constant * inv_delta2 * (offdiag + diag + md);
  InequalityVerdict v = make_verdict("prop32", bound, m.fisher_m3, 1e-12);
  const double bracket = inv_delta2 * (offdiag + diag + md);
  v.empirical_constant = bracket > 0.0 ? m.fisher_m3 / bracket : 0.0;
  v.details = {{"sup_offdiag_sq", offdiag},
               {"sup_diag_unit_sq", diag},
               {"m5_dissipation", md},
               {"delta", m.delta},
               {"proof_form_bound", inv_delta2 * (49.5 * offdiag + 162.0 * diag + kProp32Constant * md)},
               {"slack", bound - m.fisher_m3}};
  return v;
}

double delta_lower_bound(double entropy_bound) {
  return std::pow(2.0, -34.0) * std::pow(3.0, -4.0) * std::exp(-16.0 * std::max(entropy_bound, 0.0));
}

namespace {

struct AngularForm {
  double a = 0.0;  // int f <v>^-5 (v_i^2 - v_j^2)^2
  double b = 0.0;  // int f <v>^-5 v_i^2 v_j^2
  double c = 0.0;  // int f <v>^-5 (v_i^2 - v_j^2) v_i v_j
};

AngularForm angular_form(const GridDistribution& f, int i, int j) {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2) throw ConfigError("S_f needs distinct axes in {0, 1, 2}");
  const auto weight = [&](std::size_t k, const Vec3& v) { return f[k] * std::pow(bracket2(v), -2.5); };
  AngularForm q;
  q.a = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double d = v[i] * v[i] - v[j] * v[j];
    return weight(k, v) * d * d;
  });
  q.b = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double p = v[i] * v[j];
    return weight(k, v) * p * p;
  });
  q.c = node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    return weight(k, v) * (v[i] * v[i] - v[j] * v[j]) * v[i] * v[j];
  });
  return q;
}

}  // namespace

double s_f_exact(const GridDistribution& f, int i, int j) {
  const AngularForm q = angular_form(f, i, j);
  const double mean = 0.5 * (q.a + 4.0 * q.b);
  const double half_gap = 0.5 * (q.a - 4.0 * q.b);
  return mean - std::sqrt(half_gap * half_gap + 4.0 * q.c * q.c);
}

double s_f_angular(const GridDistribution& f, int i, int j, double phi) {
  if (i == j || i < 0 || j < 0 || i > 2 || j > 2) throw ConfigError("S_f needs distinct axes in {0, 1, 2}");
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return node_integral(f.grid(), [&](std::size_t k, const Vec3& v) {
    const double t = (v[i] * v[i] - v[j] * v[j]) * c + 2.0 * v[i] * v[j] * s;
    return f[k] * std::pow(bracket2(v), -2.5) * t * t;
  });
}

double s_f_functional(const GridDistribution& f, int i, int j, int n_phi) {
  if (n_phi < 16) throw ConfigError("S_f needs at least 16 angles");
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_phi; ++k)
    best = std::min(best, s_f_angular(f, i, j, 2.0 * std::numbers::pi * k / n_phi));
  return best;
}

std::vector<InequalityVerdict> check_prop33(std::span<const GridDistribution> members,
                                            std::span<const MemberMetrics> metrics, double entropy_bound,
                                            const std::string& digest) {
  if (members.empty() || members.size() != metrics.size())
    throw InsufficientDataError("Prop 3.3 checks need one metrics entry per member");
  std::vector<InequalityVerdict> out;

  double min_delta = std::numeric_limits<double>::infinity();
  double max_delta = 0.0;
  double max_entropy = -std::numeric_limits<double>::infinity();
  for (const auto& m : metrics) {
    min_delta = std::min(min_delta, m.delta);
    max_delta = std::max(max_delta, m.delta);
    max_entropy = std::max(max_entropy, m.entropy);
  }
  InequalityVerdict dv = make_verdict("delta_lower_bound", min_delta, delta_lower_bound(entropy_bound), 0.0);
  dv.details = {{"min_delta", min_delta}, {"max_delta", max_delta}, {"entropy_bound", entropy_bound},
                {"max_entropy", max_entropy}};
  if (max_entropy > entropy_bound + 1e-9) dv.note = "some members exceed the entropy bound";
  out.push_back(std::move(dv));

  const auto empirical = [&](const char* name, auto&& numerator) {
    double worst = 0.0;
    std::size_t used = 0;
    for (const auto& m : metrics) {
      if (is_equilibrium(m)) continue;
      worst = std::max(worst, numerator(m) / (m.m5 * m.dissipation));
      ++used;
    }
    InequalityVerdict v = make_verdict(name, worst, worst, 0.0);
    v.empirical_constant = worst;
    v.vacuous = used == 0;
    v.note = "empirical constant = max ratio over non-equilibrium members; holds when finite";
    return v;
  };
  out.push_back(empirical("offdiag_pressure", [](const MemberMetrics& m) { return sup_offdiag_sq(m.pressure); }));
  out.push_back(empirical("pressure_anisotropy",
                          [](const MemberMetrics& m) { return std::pow(sup_diag_gap(m.pressure), 2); }));

  double trace_slack = std::numeric_limits<double>::infinity();
  for (const auto& m : metrics)
    trace_slack = std::min(trace_slack, (2.0 / 3.0) * sup_diag_gap(m.pressure) - sup_diag_unit(m.pressure));
  InequalityVerdict tv = make_verdict("trace_reduction", trace_slack, 0.0, 1e-12);
  tv.note = "lhs = min of (2/3) sup|P_ii - P_jj| - sup|P_jj - 1|";
  out.push_back(std::move(tv));

  double min_ratio = std::numeric_limits<double>::infinity();
  double min_sf = std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  for (std::size_t k = 0; k < members.size(); ++k) {
    const Mat3& p = metrics[k].pressure;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const AngularForm q = angular_form(members[k], i, j);
        const double a = p[i][j];
        const double b = p[j][j] - p[i][i];
        const double weighted = a * a * q.a + 2.0 * a * b * q.c + b * b * q.b;
        const double sf = s_f_exact(members[k], i, j);
        min_sf = std::min(min_sf, sf);
        const double target = sf * (a * a + 0.25 * b * b);
        if (target < 1e-300) continue;
        min_ratio = std::min(min_ratio, weighted / target);
        ++used;
      }
  }
  InequalityVerdict sv = make_verdict("s_f_bound", used ? min_ratio : 1.0, 1.0, 1e-10);
  sv.vacuous = used == 0;
  sv.empirical_constant = min_sf;
  sv.note = "lhs = min of W_ij / (S_f (P_ij^2 + (P_jj - P_ii)^2 / 4)); constant = smallest S_f";
  out.push_back(std::move(sv));

  double set_slack = std::numeric_limits<double>::infinity();
  for (const auto& f : members) {
    const double positive = node_integral(f.grid(), [&](std::size_t k, const Vec3&) {
      return f[k] > 1.0 ? f[k] * std::log(f[k]) : 0.0;
    });
    for (double q : {0.01, 0.1, 1.0})
      for (double log_m : {1.0, 4.0, 16.0}) {
        const double bound = std::exp(log_m) * q + positive / log_m;
        set_slack = std::min(set_slack, bound - small_set_concentration(f, q));
      }
  }
  InequalityVerdict ss = make_verdict("small_set_estimate", set_slack, 0.0, 1e-14);
  ss.note = "sup_{|A| <= q} int_A f <= M q + H+ / log M with H+ = int_{f > 1} f log f";
  out.push_back(std::move(ss));

  for (auto& v : out) v.inputs_digest = digest;
  return out;
}

double hessian_min_eigenvalue(const Vec3& v) {
  const double b2 = bracket2(v);
  Eigen::Matrix3d h = (1.0 + 3.0 / b2) * Eigen::Matrix3d::Identity();
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) h(a, c) -= 6.0 / (b2 * b2) * v[a] * v[c];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

InequalityVerdict check_bakry_emery(std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double root3 = std::sqrt(3.0);
  std::vector<Vec3> points{{0.0, 0.0, 0.0}, {root3, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  while (points.size() < samples) {
    const double r = 10.0 * uniform01(rng);
    const double cz = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    const double sz = std::sqrt(1.0 - cz * cz);
    points.push_back({r * sz * std::cos(phi), r * sz * std::sin(phi), r * cz});
  }
  double lowest = std::numeric_limits<double>::infinity();
  double argmin = 0.0;
  for (const auto& v : points) {
    const double e = hessian_min_eigenvalue(v);
    if (e < lowest) {
      lowest = e;
      argmin = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    }
  }
  const auto scalar = [](double z) { return (z * z - z + 4.0) / ((1.0 + z) * (1.0 + z)); };
  double scalar_min = std::numeric_limits<double>::infinity();
  double scalar_arg = 0.0;
  for (int k = 0; k <= 100000; ++k) {
    const double z = 1e-3 * k;
    if (scalar(z) < scalar_min) {
      scalar_min = scalar(z);
      scalar_arg = z;
    }
  }
  InequalityVerdict v = make_verdict("bakry_emery", std::min(lowest, scalar_min), 0.625, 1e-12);
  v.empirical_constant = lowest;
  v.details = {{"sampled_min_eigenvalue", lowest},
               {"sampled_argmin_speed_sq", argmin},
               {"eigenvalue_at_speed_sq_3", hessian_min_eigenvalue({root3, 0.0, 0.0})},
               {"scalar_min", scalar_min},
               {"scalar_argmin", scalar_arg},
               {"scalar_at_3", scalar(3.0)}};
  return v;
}

CutoffKind parse_cutoff(const std::string& name) {
  if (name == "indicator") return CutoffKind::kIndicator;
  if (name == "smooth") return CutoffKind::kSmooth;
  throw ConfigError("unknown cutoff '" + name + "' (expected indicator or smooth)");
}

double cutoff_profile(double r, CutoffKind kind) {
  if (kind == CutoffKind::kIndicator) return r <= 1.0 ? 1.0 : 0.0;
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double up = psi(1.0 - r);
  return up / (up + psi(r - 0.5));
}

namespace {

void validate_coercivity(double gamma, double eta, double l) {
  if (!(gamma > -4.0 && gamma < 0.0)) throw ConfigError("coercivity lemma needs gamma in (-4, 0)");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("coercivity lemma needs eta in (0, 1]");
  if (!(l > 2.0)) throw ConfigError("coercivity lemma needs l > 2");
}

}  // namespace

CoercivityTerms coercivity_terms(const GridDistribution& f, double gamma, double eta, double l, CutoffKind kind) {
  validate_coercivity(gamma, eta, l);
  const auto& grid = f.grid();
  const FftConvolver conv(grid);
  const auto spectrum = conv.kernel_spectrum([&](const Vec3& z) {
    const double r = std::sqrt(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]);
    return std::pow(r, gamma) * (1.0 - cutoff_profile(r / eta, kind));
  });
  std::vector<double> weighted(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) weighted[k] = f[k] * bracket2(grid.node(k));
  const auto plain = conv.convolve(spectrum, f.values());
  const auto heavy = conv.convolve(spectrum, weighted);
  CoercivityTerms t;
  t.integral = grid.weight() * node_integral(grid, [&](std::size_t k, const Vec3& v) {
                 const double b2 = bracket2(v);
                 return f[k] * std::pow(b2, 0.5 * (l - 2.0)) * (heavy[k] - b2 * plain[k]);
               });
  const double m0 = moment_poly(f, 0.0);
  const double m2 = moment_poly(f, 2.0);
  t.leading = std::pow(m0, 1.0 - 0.5 * gamma) * std::pow(m2, 0.5 * gamma) * moment_poly(f, l + gamma);
  t.remainder = m2 * moment_poly(f, l - 2.0 + gamma) + std::pow(m2 / m0, 0.5 * l - 1.0 + gamma) * m0 * m2;
  return t;
}

double coercivity_inner_region(const GridDistribution& f, double gamma, double eta, double l, CutoffKind kind) {
  validate_coercivity(gamma, eta, l);
  const auto& grid = f.grid();
  const std::size_t n = f.size();
  const double total = parallel_block_sum(n, [&](std::size_t k) {
    if (f[k] == 0.0) return 0.0;
    const Vec3 v = grid.node(k);
    const double bv = bracket2(v);
    const double speed_v = bv - 1.0;
    const double weight_v = std::pow(bv, 0.5 * (l - 2.0));
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k || f[m] == 0.0) continue;
      const Vec3 w = grid.node(m);
      const double z2 = (v[0] - w[0]) * (v[0] - w[0]) + (v[1] - w[1]) * (v[1] - w[1]) + (v[2] - w[2]) * (v[2] - w[2]);
      const double bw = bracket2(w);
      if (!(z2 < bw - 1.0 && z2 < speed_v)) continue;
      const double r = std::sqrt(z2);
      acc += f[m] * std::pow(r, gamma) * (1.0 - cutoff_profile(r / eta, kind)) * weight_v * (bw - bv);
    }
    return f[k] * acc;
  });
  return grid.weight() * grid.weight() * total;
}

std::vector<InequalityVerdict> check_coercivity_lemma(std::span<const GridDistribution> members,
                                                      std::span<const GridDistribution> inner_members, double gamma,
                                                      double eta, double l, CutoffKind kind) {
  if (members.empty()) throw InsufficientDataError("coercivity check needs at least one distribution");
  std::vector<CoercivityTerms> terms;
  for (const auto& f : members) terms.push_back(coercivity_terms(f, gamma, eta, l, kind));

  double c0 = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) c0 = std::max(c0, t.integral / t.remainder);
  const double c_target = std::max(2.0 * c0, 0.0);
  double k_fit = std::numeric_limits<double>::infinity();
  for (const auto& t : terms) k_fit = std::min(k_fit, (c_target * t.remainder - t.integral) / t.leading);
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    slack = std::min(slack, -k_fit * t.leading + c_target * t.remainder - t.integral);

  std::vector<InequalityVerdict> out;
  InequalityVerdict fit = make_verdict("coercivity_fit", k_fit, kTiny, 0.0);
  fit.empirical_constant = k_fit;
  fit.details = {{"K", k_fit}, {"C", c_target}, {"C_at_K0", c0}, {"min_slack", slack}};
  for (std::size_t k = 0; k < terms.size(); ++k) {
    fit.details.emplace_back(member_key("integral", k), terms[k].integral);
    fit.details.emplace_back(member_key("leading", k), terms[k].leading);
    fit.details.emplace_back(member_key("remainder", k), terms[k].remainder);
  }
  fit.note = "K = largest value with max (I + K X) / Y <= max(2 C(0), 0); lhs = K";
  out.push_back(std::move(fit));

  double inner = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& f : inner_members) {
    inner = std::max(inner, coercivity_inner_region(f, gamma, eta, l, kind));
    scale = std::max(scale, std::abs(coercivity_terms(f, gamma, eta, l, kind).integral));
  }
  const bool checked = !inner_members.empty();
  InequalityVerdict iv = make_verdict("coercivity_inner_region", 0.0, checked ? inner : 0.0, 1e-12 * (1.0 + scale));
  iv.vacuous = !checked;
  iv.details = {{"max_inner_part", checked ? inner : 0.0}, {"integral_scale", scale}};
  iv.note = checked ? "inner symmetric region contributes <= 0" : "no members given for the direct sum";
  out.push_back(std::move(iv));
  return out;
}

double interpolation_theta(double r, double alpha) { return (9.0 * (r - 1.0) + 2.0 * alpha) / (3.0 - r); }

InequalityVerdict check_interpolation_lemma(const GridDistribution& f, const InterpolationParams& p) {
  if (!(p.r > 1.0 && p.r < 3.0)) throw ConfigError("interpolation lemma needs r in (1, 3)");
  const double holder = 0.5 * (3.0 - p.r);
  const double l3_power = 1.5 * (p.r - 1.0);
  const double l3 = lp_norm_weighted(f, 3.0, -3.0);
  const double log_const = 1.0 / (std::numbers::e * (p.r - 1.0));  // sup_{x > 1} log x / x^{r-1}
  const double small_const = 2.0 / std::numbers::e;                 // sup_{x <= 1} sqrt(x) |log x|
  const auto& grid = f.grid();

  double lhs_integral = 0.0;
  double bracket = 0.0;
  double lemma_const = 0.0;
  InequalityVerdict v;
  if (!p.stretched) {
    const double theta = interpolation_theta(p.r, p.alpha);
    lhs_integral = node_integral(grid, [&](std::size_t k, const Vec3& x) {
      return f[k] < kEntropyCutoff ? 0.0 : std::pow(bracket2(x), 0.5 * p.alpha) * f[k] * std::abs(std::log(f[k]));
    });
    bracket = moment_poly(f, p.alpha + 2.0) + std::pow(moment_poly(f, theta), holder) * std::pow(l3, l3_power) + 1.0;
    const double gauss = node_integral(grid, [&](std::size_t, const Vec3& x) {
      return std::pow(bracket2(x), 0.5 * p.alpha) * std::exp(-0.5 * (bracket2(x) - 1.0));
    });
    lemma_const = std::max({log_const, 1.0, small_const * gauss});
    v = make_verdict("interpolation_polynomial", lemma_const * bracket, lhs_integral, 0.0);
    v.details = {{"theta", theta}, {"holder_power", holder}, {"l3_power", l3_power}};
  } else {
    if (!(p.s > 0.0 && p.s < 2.0)) throw ConfigError("stretched interpolation needs s in (0, 2)");
    if (!(p.kappa > 0.0)) throw ConfigError("stretched interpolation needs kappa > 0");
    if (!(p.kappa1 > p.kappa)) throw ConfigError("stretched interpolation needs kappa1 > kappa");
    const double kappa_p = p.kappa / holder;
    if (!(p.kappa2 > kappa_p)) throw ConfigError("stretched interpolation needs kappa2 > 2 kappa / (3 - r)");
    const auto weight = [&](const Vec3& x) { return std::exp(p.kappa * std::pow(bracket2(x), 0.5 * p.s)); };
    lhs_integral = node_integral(grid, [&](std::size_t k, const Vec3& x) {
      return f[k] < kEntropyCutoff ? 0.0 : weight(x) * f[k] * std::abs(std::log(f[k]));
    });
    bracket = moment_exp(f, p.s, p.kappa1) +
              std::pow(moment_exp(f, p.s, p.kappa2), holder) * std::pow(l3, l3_power) + 1.0;
    const double m = 9.0 * (p.r - 1.0) / (3.0 - p.r);
    const double holder_const = std::pow(power_exp_sup(m, p.kappa2 - kappa_p, p.s), holder);
    const double middle_const = power_exp_sup(2.0, p.kappa1 - p.kappa, p.s);
    const double gauss = node_integral(grid, [&](std::size_t, const Vec3& x) {
      return weight(x) * std::exp(-0.5 * (bracket2(x) - 1.0));
    });
    lemma_const = std::max({log_const * holder_const, middle_const, small_const * gauss});
    v = make_verdict("interpolation_stretched", lemma_const * bracket, lhs_integral, 0.0);
    v.details = {{"holder_power", holder}, {"l3_power", l3_power}, {"holder_const", holder_const},
                 {"middle_const", middle_const}};
  }
  v.empirical_constant = lhs_integral / bracket;
  v.details.emplace_back("lemma_constant", lemma_const);
  v.details.emplace_back("bracket", bracket);
  v.details.emplace_back("weighted_entropy_abs", lhs_integral);
  v.note = "lhs uses the constant assembled from the three pointwise bounds of the proof";
  return v;
}

InequalityVerdict check_b_field_consistency(double gamma, std::size_t samples, std::uint64_t seed) {
  validate_gamma(gamma);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  double worst_projection = 0.0;
  double worst_radial = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double r = 0.2 + 4.8 * uniform01(rng);
    const double cz = 2.0 * uniform01(rng) - 1.0;
    const double phi = 2.0 * std::numbers::pi * uniform01(rng);
    const double sz = std::sqrt(1.0 - cz * cz);
    const Vec3 z{r * sz * std::cos(phi), r * sz * std::sin(phi), r * cz};
    const double step = r * 1e-4;
    Vec3 div{0.0, 0.0, 0.0};
    for (int c = 0; c < 3; ++c) {
      Vec3 up = z, down = z;
      up[c] += step;
      down[c] -= step;
      const auto a_up = landau_matrix(up, gamma);
      const auto a_down = landau_matrix(down, gamma);
      for (int row = 0; row < 3; ++row) div[row] += (a_up[row][c] - a_down[row][c]) / (2.0 * step);
    }
    const Vec3 b = landau_drift(z, gamma);
    double err = 0.0, norm = 0.0;
    for (int c = 0; c < 3; ++c) {
      err += (div[c] - b[c]) * (div[c] - b[c]);
      norm += b[c] * b[c];
    }
    worst = std::max(worst, std::sqrt(err / norm));

    const auto a = landau_matrix(z, gamma);
    double proj = 0.0;
    for (int row = 0; row < 3; ++row)
      proj = std::max(proj, std::abs(a[row][0] * z[0] + a[row][1] * z[1] + a[row][2] * z[2]));
    worst_projection = std::max(worst_projection, proj / std::pow(r, gamma + 3.0));
    const double radial = b[0] * z[0] + b[1] * z[1] + b[2] * z[2];
    const double expected = -2.0 * std::pow(r, gamma + 2.0);
    worst_radial = std::max(worst_radial, std::abs(radial - expected) / std::abs(expected));
  }
  InequalityVerdict v = make_verdict("b_field_consistency", 1e-6, worst, 0.0);
  v.empirical_constant = worst;
  v.details = {{"gamma", gamma},
               {"max_relative_error", worst},
               {"max_projection_residual", worst_projection},
               {"max_radial_identity_error", worst_radial}};
  v.note = "lhs = tolerance, rhs = largest relative error of the numerical divergence";
  return v;
}

}  // namespace landau
