#include "thra/attack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "thra/errors.hpp"
#include "thra/units.hpp"

namespace thra {

const Component* SystemModel::find_component(const std::string& id) const {
  for (const auto& c : components) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

const Component& resolve(const SystemModel& sys, const PathEntry& entry) {
  const Component* c = sys.find_component(entry.component_id);
  if (!c) {
    throw ConfigError("path references unknown component '" + entry.component_id + "'");
  }
  return *c;
}

// Direction kind must match component kind; probing at the curve midpoint
// catches mismatches and missing circulator hops at validation time.
void check_traversable(const Component& comp, const Direction& dir) {
  const bool needs_hop = std::holds_alternative<Circulator>(comp.spec);
  const bool has_hop = std::holds_alternative<CirculatorHop>(dir);
  if (needs_hop != has_hop) {
    throw InvalidDirectionError("component '" + comp.id + "' (" + kind_name(comp.spec) +
                                ") cannot be traversed as '" + to_string(dir) + "'");
  }
  if (needs_hop) {
    const auto& circ = std::get<Circulator>(comp.spec);
    const auto hop = std::get<CirculatorHop>(dir);
    for (const auto key : {std::pair{hop.from, hop.to}, std::pair{hop.to, hop.from}}) {
      if (!circ.transmissions.count(key)) {
        throw InvalidDirectionError("component '" + comp.id + "': no transmission curve for '" +
                                    std::to_string(key.first) + "->" + std::to_string(key.second) +
                                    "'");
      }
    }
  }
}

} // namespace

void validate_system(const SystemModel& sys) {
  if (sys.path.empty()) throw ConfigError("system '" + sys.name + "': empty path");
  if (sys.reflection_site >= sys.path.size()) {
    throw ConfigError("system '" + sys.name + "': reflection_site out of range");
  }
  for (const auto& comp : sys.components) {
    validate_component(comp);
  }
  for (const auto& entry : sys.path) {
    check_traversable(resolve(sys, entry), entry.direction);
  }

  const Component& site = resolve(sys, sys.path[sys.reflection_site]);
  if (!std::holds_alternative<Connector>(site.spec) && !site.back_reflection) {
    throw ConfigError("system '" + sys.name + "': reflection site '" + site.id +
                      "' has no configured reflection");
  }

  if (sys.monitoring) {
    if (sys.monitoring->tap_point >= sys.path.size()) {
      throw ConfigError("system '" + sys.name + "': monitoring tap point out of range");
    }
    validate_detector(sys.monitoring->detector);
  }
  for (const auto& spad : sys.spads) {
    validate_detector(spad);
  }
  if (!(sys.signal_click_prob >= 0.0 && sys.signal_click_prob < 1.0)) {
    throw ConfigError("system '" + sys.name + "': signal_click_prob outside [0,1)");
  }
  if (!(sys.damage_threshold_photons > 0.0)) {
    throw ConfigError("system '" + sys.name + "': damage threshold must be positive");
  }
  if (!(sys.qber_abort > 0.0 && sys.qber_abort < 0.5)) {
    throw ConfigError("system '" + sys.name + "': qber_abort must be in (0, 0.5)");
  }
}

void validate_pulse(const AttackPulse& pulse) {
  if (!(pulse.lambda_nm > 0.0) || !(pulse.peak_power_w > 0.0) || !(pulse.width_s > 0.0) ||
      !(pulse.rep_rate_hz > 0.0)) {
    throw DomainError("attack pulse: wavelength, power, width, and rate must be positive");
  }
  if (pulse.width_s * pulse.rep_rate_hz > 1.0 + 1e-12) {
    throw DomainError("attack pulse: duty cycle exceeds 1 (width * rep_rate > 1)");
  }
}

double path_attenuation_db(const SystemModel& sys, double lambda_nm, RangePolicy policy) {
  double total = 0.0;
  for (std::size_t i = 0; i < sys.reflection_site; ++i) {
    const auto& entry = sys.path[i];
    const Component& comp = resolve(sys, entry);
    total += transmittance(comp, entry.direction, lambda_nm, policy);
    total += transmittance(comp, opposite(entry.direction), lambda_nm, policy);
  }
  const Component& site = resolve(sys, sys.path[sys.reflection_site]);
  const auto refl = reflectivity(site, lambda_nm, policy);
  if (!refl) {
    throw ConfigError("reflection site '" + site.id + "' has no configured reflection");
  }
  return total + *refl;
}

double photons_for_target_mu(const SystemModel& sys, double lambda_nm, double target_mu,
                             RangePolicy policy) {
  if (!(target_mu > 0.0)) throw DomainError("photons_for_target_mu: target μ must be positive");
  return target_mu / db_to_linear(path_attenuation_db(sys, lambda_nm, policy));
}

double helstrom_success(double mu, double phase_separation_rad) {
  if (mu < 0.0) throw DomainError("helstrom_success: negative mean photon number");
  const double overlap_exponent = 2.0 * mu * (1.0 - std::cos(phase_separation_rad));
  // -expm1 keeps precision when the states are nearly indistinguishable.
  return 0.5 * (1.0 + std::sqrt(-std::expm1(-overlap_exponent)));
}

namespace {

// Forward attenuation from the entrance up to (excluding) path index `stop`.
double forward_attenuation_db(const SystemModel& sys, double lambda_nm, std::size_t stop,
                              RangePolicy policy) {
  double total = 0.0;
  for (std::size_t i = 0; i < stop; ++i) {
    const auto& entry = sys.path[i];
    total += transmittance(resolve(sys, entry), entry.direction, lambda_nm, policy);
  }
  return total;
}

// Power diverted to the monitoring detector for a given input peak power.
double monitored_power_w(const SystemModel& sys, const MonitoringTap& tap, double lambda_nm,
                         double input_power_w, RangePolicy policy) {
  double att_db = forward_attenuation_db(sys, lambda_nm, tap.tap_point, policy);
  const Component& at_tap = resolve(sys, sys.path[tap.tap_point]);
  if (const auto* coupler = std::get_if<Coupler>(&at_tap.spec)) {
    att_db += coupler->tap_ratio_db + coupler->excess_loss_db;
  }
  return input_power_w * db_to_linear(att_db);
}

} // namespace

AttackOutcome evaluate_attack(const SystemModel& sys, const AttackPulse& pulse, double target_mu,
                              RangePolicy policy) {
  validate_pulse(pulse);
  if (!(target_mu > 0.0)) throw DomainError("evaluate_attack: target μ must be positive");

  const double lambda = pulse.lambda_nm;
  AttackOutcome out;
  out.path_attenuation_db = path_attenuation_db(sys, lambda, policy);

  const double mu_in = mean_photons(lambda, pulse.peak_power_w, pulse.width_s);
  out.mu_eve = mu_in * db_to_linear(out.path_attenuation_db);
  out.required_input_photons = target_mu / db_to_linear(out.path_attenuation_db);
  out.required_peak_power_w =
      out.required_input_photons * photon_energy_j(lambda) / pulse.width_s;

  if (sys.monitoring) {
    const double p_mon =
        monitored_power_w(sys, *sys.monitoring, lambda, pulse.peak_power_w, policy);
    out.monitoring_alarm = alarm_triggered(sys.monitoring->detector, lambda, p_mon, policy);
  }

  if (!sys.spads.empty()) {
    // Photons per probe pulse that survive the full forward chain to the
    // detection stage.
    const double mu_spad =
        mu_in * db_to_linear(forward_attenuation_db(sys, lambda, sys.path.size(), policy));
    double worst_qber = 0.0;
    for (const auto& spad : sys.spads) {
      out.spad_click_prob =
          std::max(out.spad_click_prob, detection_probability(spad, lambda, mu_spad, policy));
      const double ap = afterpulse_probability(spad, lambda, mu_spad, 1, policy);
      out.afterpulse_elevation = std::max(out.afterpulse_elevation, ap);
      // Independent dark and afterpulse click causes; cap below 1 so the
      // QBER projection stays defined even when afterpulsing saturates.
      double noise = 1.0 - (1.0 - spad.dark_count_prob) * (1.0 - ap);
      noise = std::min(noise, 1.0 - 1e-12);
      worst_qber = std::max(worst_qber, qber_contribution(sys.signal_click_prob, noise));
    }
    out.projected_qber = worst_qber;
  }

  out.exceeds_damage = mu_in > sys.damage_threshold_photons ||
                       out.required_input_photons > sys.damage_threshold_photons;
  out.discrimination_success = helstrom_success(out.mu_eve, sys.phase_separation_rad);

  // 1e-9 relative slack: scans synthesize the pulse power from the required
  // photon count, so μ_Eve lands on the target only up to rounding.
  const bool reaches_target = out.mu_eve >= target_mu * (1.0 - 1e-9);
  out.feasible = !out.monitoring_alarm && !out.exceeds_damage && reaches_target &&
                 out.projected_qber < sys.qber_abort;
  return out;
}

std::vector<ScanEntry> scan_wavelengths(const SystemModel& sys, std::span<const double> lambda_grid,
                                        const AttackPulse& pulse_template, double target_mu,
                                        RangePolicy policy) {
  if (lambda_grid.empty()) throw EmptyGridError("scan_wavelengths: empty wavelength grid");

  std::vector<ScanEntry> entries;
  entries.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    AttackPulse pulse = pulse_template;
    pulse.lambda_nm = lambda;
    const double required = photons_for_target_mu(sys, lambda, target_mu, policy);
    pulse.peak_power_w = required * photon_energy_j(lambda) / pulse.width_s;
    entries.push_back({lambda, evaluate_attack(sys, pulse, target_mu, policy)});
  }

  // Quantize required photons to 0.1 dB buckets so near-equal budgets rank
  // by wavelength instead of floating-point noise.
  auto rank_key = [](const ScanEntry& e) {
    return std::llround(linear_to_db(e.outcome.required_input_photons) * 10.0);
  };
  std::stable_sort(entries.begin(), entries.end(), [&](const ScanEntry& a, const ScanEntry& b) {
    if (a.outcome.feasible != b.outcome.feasible) return a.outcome.feasible;
    if (!a.outcome.feasible) return false; // infeasible entries keep grid order
    const auto ka = rank_key(a);
    const auto kb = rank_key(b);
    if (ka != kb) return ka < kb;
    return a.lambda_nm < b.lambda_nm;
  });
  return entries;
}

} // namespace thra
