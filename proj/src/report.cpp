#include "thra/report.hpp"

#include <cstdio>

namespace thra {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

} // namespace

std::string render_scan_csv(std::span<const ScanEntry> entries) {
  std::string out =
      "lambda_nm,attenuation_db,required_photons,required_peak_power_w,alarm,"
      "afterpulse_elevation,projected_qber,feasible\n";
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%d,%.10g,%.10g,%d\n", e.lambda_nm,
                  e.outcome.path_attenuation_db, e.outcome.required_input_photons,
                  e.outcome.required_peak_power_w, e.outcome.monitoring_alarm ? 1 : 0,
                  e.outcome.afterpulse_elevation, e.outcome.projected_qber,
                  e.outcome.feasible ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string render_scan_report(const LoadedSystem& loaded, const std::string& command_echo,
                               double target_mu, const AttackPulse& pulse_template,
                               std::span<const ScanEntry> entries,
                               const std::optional<std::string>& timestamp) {
  std::string out;
  out += "wavelength scan: system '" + loaded.system.name + "'\n";
  out += "command: " + command_echo + "\n";
  out += "config digest: " + loaded.config_digest + "\n";
  if (timestamp) out += "generated: " + *timestamp + "\n";
  out += "target mu: " + num(target_mu) + ", pulse width: " + num(pulse_template.width_s) +
         " s, rep rate: " + num(pulse_template.rep_rate_hz) + " Hz\n";

  if (loaded.warnings.empty()) {
    out += "warnings: none\n";
  } else {
    out += "warnings:\n";
    for (const auto& w : loaded.warnings) {
      out += "  - " + w + "\n";
    }
  }

  std::size_t feasible_count = 0;
  for (const auto& e : entries) {
    if (e.outcome.feasible) ++feasible_count;
  }
  out += "grid points: " + std::to_string(entries.size()) +
         ", feasible: " + std::to_string(feasible_count) + "\n";

  if (feasible_count == 0) {
    out += "no feasible attack wavelength on this grid\n";
    return out;
  }
  const auto& best = entries.front();
  out += "best attack wavelength: " + num(best.lambda_nm) + " nm\n";
  out += "  path attenuation: " + num(best.outcome.path_attenuation_db) + " dB\n";
  out += "  required photons at entrance: " + num(best.outcome.required_input_photons) + "\n";
  out += "  required peak power: " + num(best.outcome.required_peak_power_w) + " W\n";
  out += "  discrimination success at target mu: " + num(best.outcome.discrimination_success) +
         "\n";
  out += "  afterpulse elevation: " + num(best.outcome.afterpulse_elevation) +
         ", projected qber: " + num(best.outcome.projected_qber) + "\n";
  return out;
}

std::string render_verdict_report(const ProtocolParams& params, const AttackObservation& obs,
                                  const BreachVerdict& verdict) {
  std::string out;
  out += "protocol: q0=" + num(params.q0) + " y0=" + num(params.y0) +
         " q_abort=" + num(params.q_abort) + " delta_y_max=" + num(params.delta_y_max) + "\n";
  out += "observation: q1=" + num(obs.q1) + " y1=" + num(obs.y1) +
         " eve_knowledge=" + num(obs.eve_knowledge_fraction) +
         " pa_subtraction=" + num(obs.pa_subtraction_fraction) + "\n";
  out += "delta_y: " + num(verdict.delta_y) + "\n";
  out += std::string("undetected: ") + yesno(verdict.undetected) + " (qber margin " +
         num(verdict.margins.qber_margin) + ", delta_y margin " +
         num(verdict.margins.delta_y_margin) + ")\n";
  out += std::string("privacy amplification defeated: ") + yesno(verdict.pa_defeated) +
         " (margin " + num(verdict.margins.pa_margin) + ")\n";
  out += std::string("breach: ") + (verdict.breach ? "YES" : "no") + "\n";
  return out;
}

std::string render_violations_report(const std::string& component_id, const DatasheetClaim& claim,
                                     std::span<const Violation> violations) {
  std::string out;
  out += "datasheet check: component '" + component_id + "' at " + num(claim.design_lambda_nm) +
         " nm\n";
  out += "claims: isolation >= " + num(claim.min_isolation_db) + " dB, insertion <= " +
         num(claim.max_insertion_db) + " dB, return loss >= " + num(claim.min_return_loss_db) +
         " dB\n";
  if (violations.empty()) {
    out += "no violations\n";
    return out;
  }
  out += std::to_string(violations.size()) + " violation(s):\n";
  for (const auto& v : violations) {
    out += "  - " + v.quantity + ": claimed " + num(v.claimed_db) + " dB, measured " +
           num(v.measured_db) + " dB (" + v.detail + ")\n";
  }
  return out;
}

} // namespace thra
