#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "landau/commands.hpp"
#include "landau/error.hpp"
#include "landau/run_config.hpp"
#include "landau/version.hpp"

namespace {

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace landau;
  CLI::App app{"Landau equation verification lab"};
  app.set_version_flag("--version", std::string(kVersion) + " (" + kGitDescribe + ")");
  app.require_subcommand(1, 1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value config file; flags override it");

  const std::pair<const char*, const char*> names[] = {
      {"verify", "run inequality checks on a seeded corpus"},
      {"solve", "integrate the homogeneous Landau equation"},
      {"decay", "moment envelopes, differential-inequality monitor and decay fits"},
  };
  std::map<std::string, Subcommand> subs;
  for (const auto& [name, help] : names) {
    Subcommand& sub = subs[name];
    sub.app = app.add_subcommand(name, help);
    sub.app->add_option("--config", config_path, "key = value config file; flags override it");
    for (const auto& key : config_keys()) {
      if (key.name == "command") continue;
      sub.values[key.name];
      std::string flag = "--" + key.name;
      if (key.name == "output") flag = "-o,--output";
      sub.options[key.name] = sub.app->add_option(flag, sub.values[key.name], key.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::kUsage);
  }

  RunConfig config;
  std::string command;
  try {
    if (!config_path.empty()) config = load_config_file(config_path);
    for (auto& [name, sub] : subs) {
      if (!sub.app->parsed()) continue;
      command = name;
      for (const auto& [key, option] : sub.options)
        if (option->count() > 0) apply_setting(config, key, sub.values[key]);
    }
    config.command = command;
  } catch (const ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kUsage);
  }
  return run_command(config, std::cout, std::cerr);
}
