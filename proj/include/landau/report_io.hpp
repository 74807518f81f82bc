#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "landau/asymptotics.hpp"
#include "landau/functionals.hpp"
#include "landau/inequalities.hpp"
#include "landau/solver.hpp"

namespace landau {

/// Writes `text` to `path`, creating parent directories. Throws IoError naming the path.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

std::string verdict_json_line(const InequalityVerdict& v);
void write_verdicts_jsonl(const std::filesystem::path& path, std::span<const InequalityVerdict> verdicts);

/// Fixed-width table: name, status (PASS, FAIL, VACUOUS), lhs, rhs, constant.
std::string verdict_summary(std::span<const InequalityVerdict> verdicts);

/// true when every non-vacuous verdict holds.
bool all_hold(std::span<const InequalityVerdict> verdicts);

inline constexpr const char* kDiagnosticsHeader = "time,mass,momx,momy,momz,energy,H,D,relH,M5,Ml,drift_max";

std::string diagnostics_csv(const Trajectory& trajectory);

/// Parses a diagnostics CSV back into step diagnostics (the columns above only).
std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& text);

std::string functional_report_json(const FunctionalReport& report);
std::string functional_report_csv(const FunctionalReport& report);

/// Long format: moment,t,value,envelope
std::string envelopes_csv(std::span<const MomentEnvelope> envelopes);
std::string envelopes_json(std::span<const MomentEnvelope> envelopes, const M5Envelope& m5);

/// Long format: t,H,D,bound,fit
std::string monitor_csv(const MonitorResult& monitor, const DecayFit* fit);
std::string decay_fit_json(const DecayFit& fit, const Schedule& schedule, const MonitorResult& monitor);

}  // namespace landau
