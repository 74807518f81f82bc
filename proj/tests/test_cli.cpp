#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "landau/commands.hpp"
#include "landau/error.hpp"
#include "landau/report_io.hpp"
#include "landau/run_config.hpp"

using namespace landau;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "landau_cli_test" / name;
  fs::remove_all(p);
  return p;
}

int run(RunConfig c) {
  std::ostringstream out, err;
  const int code = run_command(c, out, err);
  INFO(out.str());
  INFO(err.str());
  return code;
}

int shell(const std::string& args) {
  const std::string cmd = std::string(LANDAU_LAB_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig small_solve(const fs::path& out) {
  RunConfig c;
  c.command = "solve";
  c.points = 12;
  c.t_end = 0.5;
  c.init = "bimax";
  c.stride = 2;
  c.output = out;
  return c;
}

}  // namespace

TEST_CASE("config text parsing, overrides and round trip") {
  RunConfig c = parse_config_text("# comment\nN = 20\n gamma = -2.5 \ncheck = bakry, prop31\n\ntemperatures = 2,0.5,0.5\n");
  CHECK(c.points == 20);
  CHECK(c.gamma == -2.5);
  CHECK(c.checks == std::vector<std::string>{"bakry", "prop31"});
  CHECK(c.temperatures[0] == 2.0);
  apply_setting(c, "N", "24");
  CHECK(c.points == 24);
  CHECK_THROWS_AS(parse_config_text("nope = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("N = twelve\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("N 12\n"), ConfigError);
  CHECK_THROWS_AS(apply_setting(c, "projection", "maybe"), ConfigError);

  const std::string text = resolved_config_text(c);
  CHECK(resolved_config_text(parse_config_text(text)) == text);
  for (const auto& key : config_keys()) CHECK(text.find(key.name + " = ") != std::string::npos);
}

TEST_CASE("validation rejects bad settings") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.checks = {"bogus"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.gamma = -4.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.command = "decay";
  c.ell = 9.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.separation = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(expand_checks({"all"}).size() == kCheckNames.size());
  CHECK(expand_checks({"bakry", "bakry"}).size() == 1);
}

TEST_CASE("numbers and verdict lines round trip") {
  for (double x : {0.1, 1e-300, -3.0, 6.02214076e23, 1.0 / 3.0}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(NAN) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  InequalityVerdict v = make_verdict("demo", 1.5, 1.0, 1e-12);
  v.details = {{"k", 0.25}};
  const auto j = nlohmann::json::parse(verdict_json_line(v));
  CHECK(j["name"] == "demo");
  CHECK(j["lhs"].get<double>() == 1.5);
  CHECK(j["holds"] == true);
  CHECK(j["details"]["k"].get<double>() == 0.25);
  const InequalityVerdict parts[] = {v};
  CHECK(verdict_summary(parts).find("PASS") != std::string::npos);
}

TEST_CASE("verify: exit codes") {
  RunConfig c;
  c.checks = {"bakry"};
  c.output = scratch("bakry");
  CHECK(run(c) == 0);
  CHECK(fs::exists(c.output / "config.txt"));
  CHECK(fs::exists(c.output / "version.txt"));
  CHECK(fs::exists(c.output / "verdicts.jsonl"));
  CHECK(fs::exists(c.output / "summary.txt"));
  c.checks = {"bogus"};
  CHECK(run(c) == 2);
}

TEST_CASE("solve: diagnostics, snapshots and bit-identical reruns") {
  const RunConfig a = small_solve(scratch("solve_a"));
  const RunConfig b = small_solve(scratch("solve_b"));
  REQUIRE(run(a) == 0);
  REQUIRE(run(b) == 0);
  for (const char* name : {"diagnostics.csv", "verdicts.jsonl", "summary.txt", "version.txt"})
    CHECK(read_text(a.output / name) == read_text(b.output / name));
  const auto diag = parse_diagnostics_csv(read_text(a.output / "diagnostics.csv"));
  REQUIRE(diag.size() > 2);
  CHECK(diag.front().time == 0.0);
  CHECK(diag.back().time == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& d : diag) CHECK(d.drift_max <= 1e-10);
  const Trajectory t = load_trajectory(a.output, 10.0);
  CHECK(t.snapshots.size() >= 2);
  CHECK(t.gamma == -3.0);
  CHECK(diagnostics_csv(t) == read_text(a.output / "diagnostics.csv"));
}

TEST_CASE("maxwellian solve is near-stationary") {
  RunConfig c = small_solve(scratch("solve_mu"));
  c.init = "maxwellian";
  c.t_end = 1.0;
  REQUIRE(run(c) == 0);
  for (const auto& d : parse_diagnostics_csv(read_text(c.output / "diagnostics.csv"))) CHECK(d.drift_max <= 1e-10);
}

TEST_CASE("decay: insufficient data and missing input") {
  const RunConfig s = small_solve(scratch("solve_short"));
  REQUIRE(run(s) == 0);
  const fs::path two = scratch("two_snapshots");
  fs::create_directories(two / "snapshots");
  std::vector<fs::path> snaps;
  for (const auto& e : fs::directory_iterator(s.output / "snapshots")) snaps.push_back(e.path());
  std::sort(snaps.begin(), snaps.end());
  REQUIRE(snaps.size() >= 2);
  for (int k = 0; k < 2; ++k) fs::copy_file(snaps[k], two / "snapshots" / snaps[k].filename());
  fs::copy_file(s.output / "diagnostics.csv", two / "diagnostics.csv");

  RunConfig d;
  d.command = "decay";
  d.input = two;
  d.output = scratch("decay_two");
  CHECK(run(d) == 3);
  d.input = scratch("does_not_exist");
  CHECK(run(d) == 2);
}

TEST_CASE("command-line binary") {
  const fs::path out = scratch("binary");
  CHECK(shell("verify --check bakry -o " + out.string()) == 0);
  CHECK(shell("verify --check bogus -o " + out.string()) == 2);
  CHECK(shell("verify --N abc -o " + out.string()) == 2);
  CHECK(shell("frobnicate") == 2);
  CHECK(shell("--version") == 0);
  CHECK(shell("solve --init maxwellian --tend 0.2 --N 12 --L 7 -o " + out.string()) == 0);
  CHECK(read_text(out / "config.txt").find("N = 12") != std::string::npos);

  const fs::path cfg = scratch("cfg");
  fs::create_directories(cfg);
  write_text(cfg / "run.txt", "N = 16\ncheck = bakry\n");
  CHECK(shell("verify --config " + (cfg / "run.txt").string() + " --N 20 -o " + out.string()) == 0);
  const std::string resolved = read_text(out / "config.txt");
  CHECK(resolved.find("N = 20") != std::string::npos);
  CHECK(resolved.find("check = bakry") != std::string::npos);
  write_text(cfg / "bad.txt", "colour = blue\n");
  CHECK(shell("verify --config " + (cfg / "bad.txt").string() + " -o " + out.string()) == 2);
}

TEST_CASE("thread count falls back to the environment") {
  CHECK(resolve_threads(3) == 3);
  setenv("LANDAU_LAB_THREADS", "2", 1);
  CHECK(resolve_threads(0) == 2);
  unsetenv("LANDAU_LAB_THREADS");
  CHECK(resolve_threads(0) == 1);
}
