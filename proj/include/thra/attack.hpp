#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thra/components.hpp"
#include "thra/detectors.hpp"

namespace thra {

struct PathEntry {
  std::string component_id;
  Direction direction; // traversal direction on the inward (probe) pass
};

struct MonitoringTap {
  MonitoringDetector detector;
  /// Index into the path of the component that diverts light to the
  /// detector. When that component is a coupler, the monitored arm receives
  /// the tap ratio (plus excess loss); otherwise the detector sees the full
  /// power arriving at that point.
  std::size_t tap_point = 0;
};

/// An attacked subsystem: an ordered component chain, one designated
/// back-reflection site, and whatever safeguards are attached.
struct SystemModel {
  std::string name;
  std::vector<Component> components;
  std::vector<PathEntry> path;
  /// Index into `path`. The probe traverses everything before this element,
  /// reflects off it, and traverses the same elements back in the opposite
  /// direction. Elements after the site never see the probe; analysing a
  /// different reflection peak means a run with a different site.
  std::size_t reflection_site = 0;
  std::optional<MonitoringTap> monitoring;
  std::vector<Spad> spads;
  /// Per-gate click probability of the legitimate quantum signal, used to
  /// project the QBER impact of afterpulsing. Not derivable from the chain
  /// itself, so it is configuration input.
  double signal_click_prob = 0.01;
  double damage_threshold_photons = 1e13;
  /// Projected QBER at or above this aborts the protocol (feasibility gate).
  double qber_abort = 0.11;
  /// Phase separation of the two probed settings, for discrimination odds.
  double phase_separation_rad = 1.5707963267948966;

  const Component* find_component(const std::string& id) const;
};

/// Structural checks: path ids resolve, direction kinds match component
/// kinds, indices in range, the reflection site actually reflects, detector
/// parameters valid. Throws ConfigError / InvalidDirectionError / DomainError.
void validate_system(const SystemModel& sys);

/// Eve's probe pulse train.
struct AttackPulse {
  double lambda_nm = 1550.0;
  double peak_power_w = 0.0;
  double width_s = 1e-9;
  double rep_rate_hz = 1e6;
};

void validate_pulse(const AttackPulse& pulse);

struct AttackOutcome {
  double mu_eve = 0.0;                  // photons in the back-reflected pulse
  double required_input_photons = 0.0;  // to reach the target μ at the entrance
  double required_peak_power_w = 0.0;   // same, expressed for the pulse width
  double path_attenuation_db = 0.0;
  bool monitoring_alarm = false;
  double spad_click_prob = 0.0;
  double afterpulse_elevation = 0.0;    // extra click prob in the next gate
  double projected_qber = 0.0;
  bool exceeds_damage = false;
  double discrimination_success = 0.0;
  bool feasible = false;
};

/// Round-trip attenuation to the reflection site and back, in dB: forward
/// transmittances up to the site, the site's reflectivity, then each
/// traversed component again in the opposite direction.
double path_attenuation_db(const SystemModel& sys, double lambda_nm,
                           RangePolicy policy = RangePolicy::strict);

/// Photons Eve must inject at the entrance so the reflected pulse of
/// interest carries `target_mu` photons on average.
double photons_for_target_mu(const SystemModel& sys, double lambda_nm, double target_mu,
                             RangePolicy policy = RangePolicy::strict);

/// Minimum-error success probability for distinguishing two equal-prior
/// coherent states of mean photon number `mu` whose phases differ by θ:
/// ½(1 + √(1 − e^(−2μ(1−cos θ)))).
double helstrom_success(double mu, double phase_separation_rad);

/// Runs the full verdict for one pulse: photon budget, safeguard responses,
/// damage check, discrimination odds. The pulse is taken as given; μ_Eve is
/// whatever its energy yields after the round trip.
AttackOutcome evaluate_attack(const SystemModel& sys, const AttackPulse& pulse, double target_mu,
                              RangePolicy policy = RangePolicy::strict);

struct ScanEntry {
  double lambda_nm = 0.0;
  AttackOutcome outcome;
};

/// Evaluates every grid wavelength with the template's pulse shape and the
/// peak power scaled to the minimum that reaches `target_mu` — the attacker
/// has no reason to shine brighter, and every extra photon feeds the
/// safeguards. Feasible entries come first, ranked by ascending required
/// photons (ties within 0.1 dB broken by lower wavelength); infeasible
/// entries follow in grid order. Throws EmptyGridError.
std::vector<ScanEntry> scan_wavelengths(const SystemModel& sys, std::span<const double> lambda_grid,
                                        const AttackPulse& pulse_template, double target_mu,
                                        RangePolicy policy = RangePolicy::strict);

} // namespace thra
