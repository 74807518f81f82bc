#include "landau/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

#include "landau/asymptotics.hpp"
#include "landau/error.hpp"
#include "landau/functionals.hpp"
#include "landau/inequalities.hpp"
#include "landau/parallel.hpp"
#include "landau/report_io.hpp"
#include "landau/snapshot_io.hpp"
#include "landau/version.hpp"

namespace landau {

namespace {

namespace fs = std::filesystem;

/// Splits per-member verdict lists by name and combines each group, keeping first-seen order.
std::vector<InequalityVerdict> combine_by_name(const std::vector<InequalityVerdict>& parts) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<InequalityVerdict>> groups;
  for (const auto& v : parts) {
    if (!groups.count(v.name)) order.push_back(v.name);
    groups[v.name].push_back(v);
  }
  std::vector<InequalityVerdict> out;
  for (const auto& name : order) out.push_back(combine_verdicts(name, groups[name]));
  return out;
}

int finish(const fs::path& dir, const std::vector<InequalityVerdict>& verdicts, std::ostream& out) {
  write_verdicts_jsonl(dir / "verdicts.jsonl", verdicts);
  const std::string summary = verdict_summary(verdicts);
  write_text(dir / "summary.txt", summary);
  std::string jsonl;
  for (const auto& v : verdicts) jsonl += verdict_json_line(v) + "\n";
  out << summary << "verdict digest " << digest_hex(text_digest(jsonl)) << "\n";
  return all_hold(verdicts) ? static_cast<int>(ExitCode::kPass) : static_cast<int>(ExitCode::kVerdictFailure);
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu.lgrid", index);
  return buf;
}

class VerifyContext {
 public:
  explicit VerifyContext(const RunConfig& c)
      : config(c), grid(build_grid(c.half_extent, c.points)), backend(parse_backend(c.backend)) {}

  const Corpus& corpus() {
    if (!corpus_) {
      corpus_ = random_corpus(grid, config.seed, config.count, config.entropy_bound);
      digest_ = digest_hex(corpus_digest(corpus_->members));
    }
    return *corpus_;
  }
  const std::string& digest() {
    corpus();
    return digest_;
  }
  const std::vector<MemberMetrics>& metrics() {
    if (!metrics_) metrics_ = corpus_metrics(corpus().members, config.gamma, backend);
    return *metrics_;
  }

  const RunConfig& config;
  VelocityGrid grid;
  PairBackend backend;

 private:
  std::optional<Corpus> corpus_;
  std::string digest_;
  std::optional<std::vector<MemberMetrics>> metrics_;
};

std::string entropy_table(std::span<const MemberMetrics> metrics) {
  std::string text = "member,H,relH,D,M5,I_m3,ratio\n";
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    const auto& x = metrics[m];
    const double ratio = x.fisher_m3 < kEquilibriumFisher ? std::nan("") : x.dissipation * x.m5 / x.fisher_m3;
    text += std::to_string(m) + "," + format_number(x.entropy) + "," + format_number(x.relative_entropy) + "," +
            format_number(x.dissipation) + "," + format_number(x.m5) + "," + format_number(x.fisher_m3) + "," +
            format_number(ratio) + "\n";
  }
  return text;
}

/// Rotation part of the reconstruction against v_i v_j (1/T_i - 1/T_j).
InequalityVerdict prop31_closed_form(const GridDistribution& f, const std::vector<double>& temperatures,
                                     double tolerance) {
  double worst = 0.0;
  std::vector<std::pair<std::string, double>> details;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const ScoreReconstruction r = reconstruct_score(f, i, j);
      if (r.degenerate) continue;
      std::vector<double> exact(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) {
        const Vec3 v = f.grid().node(k);
        exact[k] = v[i] * v[j] * (1.0 / temperatures[i] - 1.0 / temperatures[j]);
      }
      const double e = masked_relative_error(f, r.rotation, exact);
      details.emplace_back("rotation_closed_form_error_" + std::to_string(i + 1) + std::to_string(j + 1), e);
      worst = std::max(worst, e);
    }
  InequalityVerdict v = make_verdict("prop31_closed_form", tolerance, worst, 0.0);
  v.empirical_constant = worst;
  v.details = std::move(details);
  if (v.details.empty()) {
    v.vacuous = true;
    v.note = "every pair has a near-degenerate determinant";
  }
  return v;
}

std::vector<InequalityVerdict> run_check(const std::string& check, VerifyContext& ctx, const fs::path& dir) {
  const RunConfig& c = ctx.config;
  std::vector<InequalityVerdict> out;
  if (check == "entropy") {
    out.push_back(check_theorem_entropy(ctx.metrics(), ctx.digest()));
    write_text(dir / "entropy_ratios.csv", entropy_table(ctx.metrics()));
  } else if (check == "cercignani") {
    std::vector<InequalityVerdict> parts;
    for (const auto& f : ctx.corpus().members)
      for (auto& v : check_cercignani(f, c.radius, c.gamma, ctx.backend)) parts.push_back(std::move(v));
    out = combine_by_name(parts);
  } else if (check == "l3") {
    out.push_back(check_l3_regularity(ctx.metrics(), ctx.digest()));
  } else if (check == "prop31") {
    const auto& t = c.temperatures;
    const GridDistribution f = anisotropic_gaussian(ctx.grid, t[0], t[1], t[2]);
    out.push_back(check_prop31(f, c.prop31_tolerance));
    out.push_back(prop31_closed_form(f, t, c.prop31_tolerance));
  } else if (check == "prop32") {
    std::vector<InequalityVerdict> parts;
    for (const auto& m : ctx.metrics()) parts.push_back(check_prop32(m));
    out = combine_by_name(parts);
  } else if (check == "prop33") {
    out = check_prop33(ctx.corpus().members, ctx.metrics(), c.entropy_bound, ctx.digest());
  } else if (check == "bakry") {
    out.push_back(check_bakry_emery(c.bakry_samples, c.seed));
  } else if (check == "coercivity") {
    const VelocityGrid coarse = build_grid(c.half_extent, c.inner_points);
    std::vector<GridDistribution> inner;
    for (const auto& params : ctx.corpus().parameters) inner.push_back(gaussian_mixture(coarse, params));
    out = check_coercivity_lemma(ctx.corpus().members, inner, c.gamma, c.eta, c.weight_order,
                                 parse_cutoff(c.cutoff));
  } else if (check == "interp") {
    InterpolationParams p;
    p.r = c.interp_r;
    p.alpha = c.interp_alpha;
    p.stretched = c.interp_stretched;
    p.s = c.interp_s;
    p.kappa = c.interp_kappa;
    p.kappa1 = c.interp_kappa1;
    p.kappa2 = c.interp_kappa2;
    std::vector<InequalityVerdict> parts;
    for (const auto& f : ctx.corpus().members) parts.push_back(check_interpolation_lemma(f, p));
    out = combine_by_name(parts);
  } else if (check == "bfield") {
    out.push_back(check_b_field_consistency(c.gamma, c.bfield_samples, c.seed));
  }
  for (auto& v : out)
    if (v.inputs_digest.empty() && check != "bakry" && check != "bfield" && check != "prop31")
      v.inputs_digest = ctx.digest();
  return out;
}

std::vector<InequalityVerdict> solver_verdicts(const Trajectory& t, const RunConfig& c) {
  std::vector<InequalityVerdict> out;
  const double drift = t.diagnostics.empty() ? 0.0 : t.diagnostics.back().drift_max;
  double drift_total = 0.0;
  for (const auto& d : t.diagnostics) drift_total = std::max(drift_total, d.drift_max);
  auto total = make_verdict("solver_total_drift", c.drift_tolerance, drift_total, 0.0);
  total.details = {{"final_drift", drift}};
  out.push_back(total);
  if (c.projection) {
    auto step = make_verdict("solver_step_drift", 1e-13, t.max_step_drift, 0.0);
    out.push_back(step);
  }
  auto mono = make_verdict("solver_entropy_monotone", 0.0, static_cast<double>(t.entropy_increases), 0.0);
  mono.note = "steps with H increasing by more than 1e-10";
  out.push_back(mono);
  out.push_back(make_verdict("solver_entropy_inequality", c.entropy_tolerance, t.max_entropy_inequality_excess, 0.0));
  double rel_increase = 0.0;
  for (std::size_t n = 1; n < t.diagnostics.size(); ++n)
    rel_increase = std::max(rel_increase, t.diagnostics[n].relative_entropy - t.diagnostics[n - 1].relative_entropy);
  out.push_back(make_verdict("solver_relative_entropy_monotone", 1e-10, rel_increase, 0.0));
  return out;
}

Trajectory trajectory_for_decay(const RunConfig& c, const fs::path& dir, std::ostream& out) {
  if (!c.input.empty()) return load_trajectory(c.input, c.ell);
  out << "no input directory; solving inline\n";
  Trajectory t = solve(initial_datum(c), c.solver_config());
  save_trajectory(dir, t);
  return t;
}

}  // namespace

std::uint64_t text_digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

GridDistribution initial_datum(const RunConfig& c) {
  const VelocityGrid grid = build_grid(c.half_extent, c.points);
  if (c.init == "maxwellian") return reduced_maxwellian(grid);
  if (c.init == "bimax") {
    const auto params = bimaxwellian_parameters(c.separation);
    return gaussian_mixture(grid, params);
  }
  if (c.init == "anisotropic") return anisotropic_gaussian(grid, c.temperatures[0], c.temperatures[1], c.temperatures[2]);
  if (c.init == "corpus") return random_corpus(grid, c.seed, c.count, c.entropy_bound).members.at(c.member);
  throw ConfigError("init: unknown initial datum '" + c.init + "'");
}

Trajectory load_trajectory(const fs::path& dir, double moment_order) {
  if (!fs::is_directory(dir)) throw IoError("trajectory directory '" + dir.string() + "' does not exist");
  Trajectory t;
  t.moment_order = moment_order;
  std::vector<fs::path> files;
  const fs::path snaps = dir / "snapshots";
  if (fs::is_directory(snaps))
    for (const auto& e : fs::directory_iterator(snaps))
      if (e.path().extension() == ".lgrid") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& p : files) {
    Snapshot s = read_snapshot(p);
    t.gamma = s.gamma;
    if (!t.snapshots.empty() && !(s.time > t.snapshots.back().time))
      throw IoError("snapshot times are not increasing at '" + p.string() + "'");
    t.snapshots.push_back({s.time, std::move(s.f)});
  }
  t.diagnostics = parse_diagnostics_csv(read_text(dir / "diagnostics.csv"));
  return t;
}

void save_trajectory(const fs::path& dir, const Trajectory& t) {
  const fs::path snaps = dir / "snapshots";
  std::error_code ec;
  fs::remove_all(snaps, ec);
  fs::create_directories(snaps, ec);
  if (ec) throw IoError("cannot create '" + snaps.string() + "': " + ec.message());
  for (std::size_t n = 0; n < t.snapshots.size(); ++n)
    write_snapshot(snaps / snapshot_name(n), t.snapshots[n].f, t.gamma, t.snapshots[n].time);
  write_text(dir / "diagnostics.csv", diagnostics_csv(t));
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
  VerifyContext ctx(config);
  std::vector<InequalityVerdict> verdicts;
  for (const auto& check : expand_checks(config.checks)) {
    out << "running " << check << "\n" << std::flush;
    for (auto& v : run_check(check, ctx, config.output)) verdicts.push_back(std::move(v));
  }
  return finish(config.output, verdicts, out);
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  const Trajectory t = solve(initial_datum(config), config.solver_config());
  save_trajectory(config.output, t);
  out << "steps " << (t.diagnostics.empty() ? 0 : t.diagnostics.size() - 1) << ", snapshots " << t.snapshots.size()
      << "\n";
  return finish(config.output, solver_verdicts(t, config), out);
}

int cmd_decay(const RunConfig& config, std::ostream& out) {
  const fs::path dir = config.output;
  const Trajectory t = trajectory_for_decay(config, dir, out);
  const DecayMode mode = parse_decay_mode(config.mode);
  const DecayFit fit = decay_fit(t, mode, config.decay_s);

  std::vector<MomentSpec> specs;
  for (double order : {5.0, 10.0, config.ell})
    if (std::none_of(specs.begin(), specs.end(), [&](const MomentSpec& s) { return s.order == order; }))
      specs.push_back({false, order, 0.0, 0.0});
  if (exp_moment_in_propagation_range(config.decay_s, config.decay_kappa))
    specs.push_back({true, 0.0, config.decay_s, config.decay_kappa});
  const auto envelopes = track_moments(t, specs);
  const M5Envelope m5 = m5_envelope(t, config.ell);
  write_text(dir / "envelopes.csv", envelopes_csv(envelopes));
  write_text(dir / "envelopes.json", envelopes_json(envelopes, m5));

  std::vector<InequalityVerdict> verdicts;
  for (const auto& e : envelopes) {
    double slack = INFINITY;
    for (std::size_t j = 0; j < e.times.size(); ++j)
      slack = std::min(slack, e.intercept + e.slope * e.times[j] - e.values[j]);
    auto v = make_verdict("moment_envelope_" + e.spec.label(), slack, 0.0, 1e-12 * (1.0 + std::abs(e.intercept)));
    v.empirical_constant = e.slope;
    v.details = {{"intercept", e.intercept}, {"slope", e.slope}, {"slope_constant", e.slope_constant}};
    verdicts.push_back(v);
  }
  {
    double slack = INFINITY;
    for (std::size_t j = 0; j < m5.times.size(); ++j)
      slack = std::min(slack, m5.fitted_constant * std::pow(1.0 + m5.times[j], m5.exponent) - m5.m5[j]);
    auto v = make_verdict("m5_envelope", slack, 0.0, 1e-12 * (1.0 + m5.fitted_constant));
    v.empirical_constant = m5.fitted_constant;
    v.details = {{"exponent", m5.exponent}, {"interpolated_constant", m5.interpolated_constant}};
    verdicts.push_back(v);
  }

  Schedule schedule;
  MonitorResult monitor;
  if (mode == DecayMode::kAlgebraic) {
    schedule = choose_schedule_algebraic(config.ell, config.position);
    monitor = differential_inequality_monitor(t, schedule);
    verdicts.push_back(monitor.verdict);
  } else {
    schedule = choose_schedule_stretched(config.decay_s, config.decay_kappa);
    for (const auto& d : t.diagnostics) {
      monitor.times.push_back(d.time);
      monitor.relative_entropy.push_back(d.relative_entropy);
      monitor.dissipation.push_back(d.dissipation);
      monitor.bound.push_back(std::nan(""));
    }
    monitor.c0 = monitor.c1 = monitor.c2 = std::nan("");
  }
  write_text(dir / "monitor.csv", monitor_csv(monitor, &fit));
  write_text(dir / "decay_fit.json", decay_fit_json(fit, schedule, monitor));

  auto positive = make_verdict("decay_exponent_positive", fit.exponent, std::numeric_limits<double>::min(), 0.0);
  positive.empirical_constant = fit.exponent;
  positive.details = {{"residual", fit.residual}, {"envelope_constant", fit.envelope_constant}};
  verdicts.push_back(positive);
  if (mode == DecayMode::kAlgebraic) {
    auto window = make_verdict("decay_exponent_above_window", fit.exponent, schedule.beta_sup, 0.0);
    window.empirical_constant = fit.exponent;
    window.details = {{"beta", schedule.beta}, {"beta_sup", schedule.beta_sup}, {"l", schedule.l}};
    verdicts.push_back(window);
  }
  double fit_slack = INFINITY;
  for (const auto& s : t.snapshots) {
    const double h = relative_entropy(s.f);
    if (h > 1e-12) fit_slack = std::min(fit_slack, decay_model(fit, s.time) - h);
  }
  verdicts.push_back(make_verdict("decay_fit_envelope", fit_slack, 0.0, 1e-15));
  out << "fitted exponent " << format_number(fit.exponent) << "\n";
  return finish(dir, verdicts, out);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("LANDAU_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    set_thread_count(resolve_threads(config.threads));
    std::error_code ec;
    fs::create_directories(config.output, ec);
    if (ec) throw IoError("cannot create output directory '" + config.output.string() + "': " + ec.message());
    write_text(config.output / "config.txt", resolved_config_text(config));
    write_text(config.output / "version.txt",
               std::string("landau_lab ") + kVersion + " (" + kGitDescribe + ")\n");
    if (config.command == "verify") return cmd_verify(config, out);
    if (config.command == "solve") return cmd_solve(config, out);
    return cmd_decay(config, out);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  } catch (const InsufficientDataError& e) {
    err << "insufficient data: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kInsufficientData);
  } catch (const StepSizeError& e) {
    err << "step failure at t = " << format_number(e.time()) << " (dt = " << format_number(e.dt())
        << "): " << e.what() << "\n";
    return static_cast<int>(ExitCode::kNumericFailure);
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kNumericFailure);
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  }
}

}  // namespace landau
