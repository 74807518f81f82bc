#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "landau/functionals.hpp"
#include "landau/solver.hpp"

namespace landau {

/// Every setting of a run. Keys in the config file and long flag names are
/// the same strings; see config_keys() for the list.
struct RunConfig {
  std::string command = "verify";  // verify | solve | decay

  // grid
  double half_extent = 7.0;  // L
  int points = 32;           // N
  double gamma = -3.0;

  // corpus
  std::uint64_t seed = 1;
  std::size_t count = 50;
  double entropy_bound = 0.0;  // H̄

  // solver
  double dt = 0.05;
  double t_end = 1.0;
  std::string stepper = "heun";
  bool projection = true;
  int stride = 10;
  bool adaptive = true;
  double max_change = 0.05;
  std::string backend = "fft";

  // initial datum for solve / inline decay
  std::string init = "bimax";  // maxwellian | bimax | anisotropic | corpus
  double separation = 1.0;
  std::vector<double> temperatures{1.5, 1.0, 0.5};
  std::size_t member = 0;  // corpus index when init = corpus

  std::filesystem::path output = "landau_out";
  int threads = 0;  // 0: LANDAU_LAB_THREADS or 1

  // verify
  std::vector<std::string> checks{"all"};
  double radius = 4.0;  // R
  double eta = 1.0;
  double weight_order = 4.0;  // l of the coercivity lemma
  std::string cutoff = "smooth";
  int inner_points = 16;
  double interp_r = 5.0 / 3.0;
  double interp_alpha = 0.0;
  bool interp_stretched = false;
  double interp_s = 1.0;
  double interp_kappa = 0.1;
  double interp_kappa1 = 0.2;
  double interp_kappa2 = 0.5;
  std::size_t bakry_samples = 10000;
  std::size_t bfield_samples = 1000;

  // decay
  std::string mode = "algebraic";
  double ell = 12.0;
  double position = 0.5;
  double decay_s = 0.5;
  double decay_kappa = 0.1;
  std::filesystem::path input;

  // tolerance overrides
  double prop31_tolerance = 1e-3;
  double drift_tolerance = 1e-10;
  double entropy_tolerance = 1e-8;

  /// Throws ConfigError on the first out-of-range or inconsistent setting.
  void validate() const;
  SolverConfig solver_config() const;
};

inline const std::vector<std::string> kCheckNames{"entropy", "cercignani", "l3",    "prop31",     "prop32", "prop33",
                                                  "bakry",   "coercivity", "interp", "bfield"};

/// Expands "all" and rejects unknown names.
std::vector<std::string> expand_checks(const std::vector<std::string>& names);

PairBackend parse_backend(const std::string& name);
std::string backend_name(PairBackend backend);

struct ConfigKey {
  std::string name;
  std::string help;
};

const std::vector<ConfigKey>& config_keys();

/// Sets one key from its text form. Unknown keys and malformed values throw ConfigError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);
std::string get_setting(const RunConfig& config, const std::string& key);

/// "key = value" lines; '#' starts a comment, blank lines are ignored.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

/// Every key in config_keys() order, in the format parse_config_text reads.
std::string resolved_config_text(const RunConfig& config);

}  // namespace landau
