#pragma once

#include <iosfwd>
#include <string>

#include "landau/run_config.hpp"
#include "landau/solver.hpp"

namespace landau {

/// FNV-1a 64-bit hash of a string.
std::uint64_t text_digest(const std::string& text);

/// Builds the initial datum named by config.init on the configured grid.
GridDistribution initial_datum(const RunConfig& config);

/// Snapshots (snapshots/snap_*.lgrid, sorted by name) and diagnostics.csv of a solve directory.
Trajectory load_trajectory(const std::filesystem::path& dir, double moment_order);
void save_trajectory(const std::filesystem::path& dir, const Trajectory& trajectory);

/// The three commands. They throw on errors; run_command maps exceptions to exit codes.
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, std::ostream& out);
int cmd_decay(const RunConfig& config, std::ostream& out);

/// Validates, applies the thread count, writes config.txt and version.txt into
/// the output directory, dispatches on config.command and returns the exit code.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// threads if positive, else LANDAU_LAB_THREADS if set and positive, else 1.
int resolve_threads(int threads);

}  // namespace landau
