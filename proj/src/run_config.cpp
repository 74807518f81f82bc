#include "landau/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "landau/asymptotics.hpp"
#include "landau/error.hpp"
#include "landau/inequalities.hpp"
#include "landau/kernel_table.hpp"
#include "landau/report_io.hpp"

namespace landau {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key + ": expected a number, got '" + text + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long x = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return x;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  const long long x = to_integer(key, text);
  if (x < 0) throw ConfigError(key + ": must be nonnegative");
  return static_cast<std::size_t>(x);
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

struct Entry {
  ConfigKey key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Entry number_entry(std::string name, std::string help, T RunConfig::*field) {
  Entry e;
  e.key = {name, std::move(help)};
  e.set = [name, field](RunConfig& c, const std::string& v) {
    if constexpr (std::is_same_v<T, double>) {
      c.*field = to_double(name, v);
    } else if constexpr (std::is_same_v<T, int>) {
      c.*field = static_cast<int>(to_integer(name, v));
    } else {
      c.*field = static_cast<T>(to_count(name, v));
    }
  };
  e.get = [field](const RunConfig& c) {
    if constexpr (std::is_same_v<T, double>) {
      return format_number(c.*field);
    } else {
      return std::to_string(c.*field);
    }
  };
  return e;
}

Entry string_entry(std::string name, std::string help, std::string RunConfig::*field) {
  return {{std::move(name), std::move(help)},
          [field](RunConfig& c, const std::string& v) { c.*field = v; },
          [field](const RunConfig& c) { return c.*field; }};
}

Entry path_entry(std::string name, std::string help, std::filesystem::path RunConfig::*field) {
  return {{std::move(name), std::move(help)},
          [field](RunConfig& c, const std::string& v) { c.*field = v; },
          [field](const RunConfig& c) { return (c.*field).string(); }};
}

Entry bool_entry(std::string name, std::string help, bool RunConfig::*field) {
  return {{name, std::move(help)},
          [name, field](RunConfig& c, const std::string& v) { c.*field = to_bool(name, v); },
          [field](const RunConfig& c) { return std::string(c.*field ? "true" : "false"); }};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    t.push_back(string_entry("command", "verify | solve | decay", &RunConfig::command));
    t.push_back(number_entry("L", "grid half-extent", &RunConfig::half_extent));
    t.push_back(number_entry("N", "points per axis", &RunConfig::points));
    t.push_back(number_entry("gamma", "interaction exponent in (-4, 0]", &RunConfig::gamma));
    t.push_back(number_entry("seed", "corpus seed", &RunConfig::seed));
    t.push_back(number_entry("count", "corpus size", &RunConfig::count));
    t.push_back(number_entry("hbar", "entropy bound of the corpus", &RunConfig::entropy_bound));
    t.push_back(number_entry("dt", "time step (upper bound when adaptive)", &RunConfig::dt));
    t.push_back(number_entry("tend", "final time", &RunConfig::t_end));
    t.push_back(string_entry("stepper", "euler | heun", &RunConfig::stepper));
    t.push_back(bool_entry("projection", "project onto the collision invariants after each step",
                           &RunConfig::projection));
    t.push_back(number_entry("stride", "snapshot every this many steps", &RunConfig::stride));
    t.push_back(bool_entry("adaptive", "adaptive time step", &RunConfig::adaptive));
    t.push_back(number_entry("max_change", "largest relative nodewise change per adaptive step",
                             &RunConfig::max_change));
    t.push_back(string_entry("backend", "pair sums: direct | fft", &RunConfig::backend));
    t.push_back(string_entry("init", "maxwellian | bimax | anisotropic | corpus", &RunConfig::init));
    t.push_back(number_entry("separation", "bi-Maxwellian separation", &RunConfig::separation));
    t.push_back({{"temperatures", "anisotropic temperatures T1,T2,T3"},
                 [](RunConfig& c, const std::string& v) {
                   const auto items = split_list(v);
                   if (items.size() != 3) throw ConfigError("temperatures: expected three comma-separated values");
                   c.temperatures.clear();
                   for (const auto& s : items) c.temperatures.push_back(to_double("temperatures", s));
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (double x : c.temperatures) out += (out.empty() ? "" : ",") + format_number(x);
                   return out;
                 }});
    t.push_back(number_entry("member", "corpus member used when init = corpus", &RunConfig::member));
    t.push_back(path_entry("output", "output directory", &RunConfig::output));
    t.push_back(number_entry("threads", "worker threads (0: LANDAU_LAB_THREADS or 1)", &RunConfig::threads));
    t.push_back({{"check", "comma-separated checks or all"},
                 [](RunConfig& c, const std::string& v) { c.checks = split_list(v); },
                 [](const RunConfig& c) { return join(c.checks); }});
    t.push_back(number_entry("R", "truncation radius of the Cercignani bound", &RunConfig::radius));
    t.push_back(number_entry("eta", "coercivity cutoff scale", &RunConfig::eta));
    t.push_back(number_entry("l", "coercivity weight order", &RunConfig::weight_order));
    t.push_back(string_entry("cutoff", "indicator | smooth", &RunConfig::cutoff));
    t.push_back(number_entry("inner_N", "points per axis of the inner-region members", &RunConfig::inner_points));
    t.push_back(number_entry("r", "interpolation exponent in (1, 3)", &RunConfig::interp_r));
    t.push_back(number_entry("alpha", "interpolation weight", &RunConfig::interp_alpha));
    t.push_back(bool_entry("interp_stretched", "stretched-exponential interpolation variant",
                           &RunConfig::interp_stretched));
    t.push_back(number_entry("interp_s", "stretched interpolation exponent", &RunConfig::interp_s));
    t.push_back(number_entry("interp_kappa", "stretched interpolation kappa", &RunConfig::interp_kappa));
    t.push_back(number_entry("interp_kappa1", "stretched interpolation kappa1", &RunConfig::interp_kappa1));
    t.push_back(number_entry("interp_kappa2", "stretched interpolation kappa2", &RunConfig::interp_kappa2));
    t.push_back(number_entry("bakry_samples", "random velocities for the Hessian bound", &RunConfig::bakry_samples));
    t.push_back(number_entry("bfield_samples", "random z for the b-field check", &RunConfig::bfield_samples));
    t.push_back(string_entry("mode", "decay mode: algebraic | stretched", &RunConfig::mode));
    t.push_back(number_entry("ell", "moment order of the algebraic schedule", &RunConfig::ell));
    t.push_back(number_entry("position", "relative position of nu in its window", &RunConfig::position));
    t.push_back(number_entry("s", "stretched decay exponent", &RunConfig::decay_s));
    t.push_back(number_entry("kappa", "stretched moment kappa", &RunConfig::decay_kappa));
    t.push_back(path_entry("input", "trajectory directory for decay (empty: solve inline)", &RunConfig::input));
    t.push_back(number_entry("prop31_tol", "relative tolerance of the score reconstruction",
                             &RunConfig::prop31_tolerance));
    t.push_back(number_entry("drift_tol", "total invariant drift tolerance", &RunConfig::drift_tolerance));
    t.push_back(number_entry("entropy_tol", "discrete entropy inequality tolerance", &RunConfig::entropy_tolerance));
    return t;
  }();
  return table;
}

const Entry& find_entry(const std::string& key) {
  for (const auto& e : entries())
    if (e.key.name == key) return e;
  throw ConfigError("unknown config key '" + key + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::vector<std::string> expand_checks(const std::vector<std::string>& names) {
  std::vector<std::string> out;
  require(!names.empty(), "check: no checks selected");
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& c : kCheckNames)
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
      continue;
    }
    require(std::find(kCheckNames.begin(), kCheckNames.end(), n) != kCheckNames.end(),
            "check: unknown check '" + n + "'");
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  }
  return out;
}

PairBackend parse_backend(const std::string& name) {
  if (name == "direct") return PairBackend::kDirect;
  if (name == "fft") return PairBackend::kFft;
  throw ConfigError("backend: expected direct or fft, got '" + name + "'");
}

std::string backend_name(PairBackend backend) { return backend == PairBackend::kFft ? "fft" : "direct"; }

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  find_entry(key).set(config, value);
}

std::string get_setting(const RunConfig& config, const std::string& key) { return find_entry(key).get(config); }

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config_text(text, std::move(base));
}

std::string resolved_config_text(const RunConfig& config) {
  std::string out;
  for (const auto& e : entries()) out += e.key.name + " = " + e.get(config) + "\n";
  return out;
}

void RunConfig::validate() const {
  require(command == "verify" || command == "solve" || command == "decay",
          "command: expected verify, solve or decay, got '" + command + "'");
  require(std::isfinite(half_extent) && half_extent > 0.0, "L: must be positive");
  require(points >= 4 && points <= 256, "N: must lie in [4, 256]");
  try {
    validate_gamma(gamma);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("gamma: ") + e.what());
  }
  require(count >= 1, "count: must be at least 1");
  require(std::isfinite(entropy_bound), "hbar: must be finite");
  require(dt > 0.0 && std::isfinite(dt), "dt: must be positive");
  require(t_end >= 0.0 && std::isfinite(t_end), "tend: must be nonnegative");
  parse_stepper(stepper);
  require(stride >= 1, "stride: must be at least 1");
  require(max_change > 0.0 && max_change < 1.0, "max_change: must lie in (0, 1)");
  parse_backend(backend);
  require(init == "maxwellian" || init == "bimax" || init == "anisotropic" || init == "corpus",
          "init: expected maxwellian, bimax, anisotropic or corpus, got '" + init + "'");
  require(separation >= 0.0 && separation < std::sqrt(3.0), "separation: must lie in [0, sqrt(3))");
  require(temperatures.size() == 3 &&
              std::all_of(temperatures.begin(), temperatures.end(), [](double t) { return t > 0.0; }),
          "temperatures: need three positive values");
  require(init != "corpus" || member < count, "member: must be below count");
  require(threads >= 0, "threads: must be nonnegative");
  expand_checks(checks);
  require(radius > 1.0, "R: must exceed 1");
  require(eta > 0.0 && eta <= 1.0, "eta: must lie in (0, 1]");
  require(weight_order > 2.0, "l: must exceed 2");
  parse_cutoff(cutoff);
  require(inner_points >= 4 && inner_points <= 32, "inner_N: must lie in [4, 32]");
  require(interp_r > 1.0 && interp_r < 3.0, "r: must lie in (1, 3)");
  require(interp_alpha >= 0.0, "alpha: must be nonnegative");
  require(bakry_samples >= 1 && bfield_samples >= 1, "samples: must be at least 1");
  parse_decay_mode(mode);
  require(position > 0.0 && position < 1.0, "position: must lie in (0, 1)");
  require(prop31_tolerance > 0.0 && drift_tolerance > 0.0 && entropy_tolerance > 0.0,
          "tolerances: must be positive");
  if (command == "decay") {
    if (parse_decay_mode(mode) == DecayMode::kAlgebraic)
      choose_schedule_algebraic(ell, position);
    else
      choose_schedule_stretched(decay_s, decay_kappa);
  }
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.gamma = gamma;
  s.half_extent = half_extent;
  s.points_per_axis = points;
  s.dt = dt;
  s.t_end = t_end;
  s.stepper = parse_stepper(stepper);
  s.conservation_projection = projection;
  s.snapshot_stride = stride;
  s.adaptive = adaptive;
  s.max_relative_change = max_change;
  s.moment_order = ell;
  s.backend = parse_backend(backend);
  return s;
}

}  // namespace landau
