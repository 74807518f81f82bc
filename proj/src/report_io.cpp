#include "landau/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "landau/error.hpp"

namespace landau {

namespace {

using nlohmann::ordered_json;

ordered_json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double parse_number(const std::string& text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw IoError("malformed number '" + text + "'");
  return x;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string verdict_json_line(const InequalityVerdict& v) {
  ordered_json j;
  j["name"] = v.name;
  j["lhs"] = number_json(v.lhs);
  j["rhs"] = number_json(v.rhs);
  j["empirical_constant"] = number_json(v.empirical_constant);
  j["holds"] = v.holds;
  j["vacuous"] = v.vacuous;
  j["inputs_digest"] = v.inputs_digest;
  j["tolerance"] = number_json(v.tolerance);
  j["note"] = v.note;
  ordered_json details = ordered_json::object();
  for (const auto& [key, value] : v.details) details[key] = number_json(value);
  j["details"] = details;
  return j.dump();
}

void write_verdicts_jsonl(const std::filesystem::path& path, std::span<const InequalityVerdict> verdicts) {
  std::string text;
  for (const auto& v : verdicts) text += verdict_json_line(v) + "\n";
  write_text(path, text);
}

std::string verdict_summary(std::span<const InequalityVerdict> verdicts) {
  std::ostringstream out;
  out << std::left << std::setw(36) << "check" << std::setw(9) << "status" << std::setw(24) << "lhs"
      << std::setw(24) << "rhs"
      << "constant\n";
  for (const auto& v : verdicts) {
    const char* status = v.vacuous ? "VACUOUS" : (v.holds ? "PASS" : "FAIL");
    out << std::left << std::setw(36) << v.name << std::setw(9) << status << std::setw(24) << format_number(v.lhs)
        << std::setw(24) << format_number(v.rhs) << format_number(v.empirical_constant) << "\n";
  }
  return out.str();
}

bool all_hold(std::span<const InequalityVerdict> verdicts) {
  for (const auto& v : verdicts)
    if (!v.vacuous && !v.holds) return false;
  return true;
}

std::string diagnostics_csv(const Trajectory& trajectory) {
  std::string text = std::string(kDiagnosticsHeader) + "\n";
  for (const auto& d : trajectory.diagnostics) {
    const double row[] = {d.time,    d.moments.mass, d.moments.momentum[0], d.moments.momentum[1],
                          d.moments.momentum[2], d.moments.energy, d.entropy, d.dissipation,
                          d.relative_entropy, d.m5, d.ml, d.drift_max};
    for (std::size_t c = 0; c < std::size(row); ++c) {
      if (c) text += ',';
      text += format_number(row[c]);
    }
    text += '\n';
  }
  return text;
}

std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) throw IoError("diagnostics CSV has an unexpected header");
  std::vector<StepDiagnostics> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 12) throw IoError("diagnostics CSV row has " + std::to_string(cells.size()) + " columns");
    StepDiagnostics d;
    d.time = parse_number(cells[0]);
    d.moments.mass = parse_number(cells[1]);
    for (int a = 0; a < 3; ++a) d.moments.momentum[a] = parse_number(cells[2 + a]);
    d.moments.energy = parse_number(cells[5]);
    d.entropy = parse_number(cells[6]);
    d.dissipation = parse_number(cells[7]);
    d.relative_entropy = parse_number(cells[8]);
    d.m5 = parse_number(cells[9]);
    d.ml = parse_number(cells[10]);
    d.drift_max = parse_number(cells[11]);
    out.push_back(d);
  }
  return out;
}

std::string functional_report_json(const FunctionalReport& report) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, value] : flatten(report)) j[key] = number_json(value);
  return j.dump(2) + "\n";
}

std::string functional_report_csv(const FunctionalReport& report) {
  std::string text = "key,value\n";
  for (const auto& [key, value] : flatten(report)) text += key + "," + format_number(value) + "\n";
  return text;
}

std::string envelopes_csv(std::span<const MomentEnvelope> envelopes) {
  std::string text = "moment,t,value,envelope\n";
  for (const auto& e : envelopes)
    for (std::size_t j = 0; j < e.times.size(); ++j)
      text += e.spec.label() + "," + format_number(e.times[j]) + "," + format_number(e.values[j]) + "," +
              format_number(e.intercept + e.slope * e.times[j]) + "\n";
  return text;
}

std::string envelopes_json(std::span<const MomentEnvelope> envelopes, const M5Envelope& m5) {
  ordered_json j;
  ordered_json list = ordered_json::array();
  for (const auto& e : envelopes) {
    ordered_json item;
    item["moment"] = e.spec.label();
    item["intercept"] = number_json(e.intercept);
    item["slope"] = number_json(e.slope);
    item["slope_exponent"] = number_json(e.slope_exponent);
    item["slope_constant"] = number_json(e.slope_constant);
    item["samples"] = e.times.size();
    list.push_back(item);
  }
  j["envelopes"] = list;
  j["m5_envelope"] = {{"exponent", number_json(m5.exponent)},
                      {"fitted_constant", number_json(m5.fitted_constant)},
                      {"interpolated_constant", number_json(m5.interpolated_constant)}};
  return j.dump(2) + "\n";
}

std::string monitor_csv(const MonitorResult& monitor, const DecayFit* fit) {
  std::string text = "t,H,D,bound,fit\n";
  for (std::size_t j = 0; j < monitor.times.size(); ++j) {
    const double t = monitor.times[j];
    const double model = fit ? decay_model(*fit, t) : std::nan("");
    text += format_number(t) + "," + format_number(monitor.relative_entropy[j]) + "," +
            format_number(monitor.dissipation[j]) + "," + format_number(monitor.bound[j]) + "," +
            format_number(model) + "\n";
  }
  return text;
}

std::string decay_fit_json(const DecayFit& fit, const Schedule& schedule, const MonitorResult& monitor) {
  ordered_json j;
  j["mode"] = decay_mode_name(fit.mode);
  j["exponent"] = number_json(fit.exponent);
  j["log_constant"] = number_json(fit.log_constant);
  j["envelope_constant"] = number_json(fit.envelope_constant);
  j["residual"] = number_json(fit.residual);
  j["samples"] = fit.samples;
  if (fit.mode == DecayMode::kStretched) {
    j["s"] = number_json(fit.s);
    j["power"] = number_json(fit.power);
    j["log_power"] = number_json(fit.log_power);
  }
  j["schedule"] = {{"l", number_json(schedule.l)},       {"k", number_json(schedule.k)},
                   {"nu", number_json(schedule.nu)},     {"nu_low", number_json(schedule.nu_low)},
                   {"nu_high", number_json(schedule.nu_high)}, {"a", number_json(schedule.a)},
                   {"b", number_json(schedule.b)},       {"beta", number_json(schedule.beta)},
                   {"beta_sup", number_json(schedule.beta_sup)}};
  j["monitor"] = {{"c0", number_json(monitor.c0)}, {"c1", number_json(monitor.c1)}, {"c2", number_json(monitor.c2)}};
  return j.dump(2) + "\n";
}

}  // namespace landau
