#pragma once

#include <cstdint>

#include "thra/spectral.hpp"

namespace thra {

/// Classical photodiode watching a device entrance. The responsivity curve
/// stores log10(A/W) in the value column so that the many-decade roll-off
/// outside the sensitive band interpolates sensibly.
struct MonitoringDetector {
  SpectralCurve responsivity_log10;
  double dark_current_a = 0.0;
  /// Alarm when photocurrent >= alarm_factor * dark_current_a. Equality
  /// triggers: a reading at the noise floor counts as seen, which is the
  /// conservative reading for the defender.
  double alarm_factor = 1.0;
};

void validate_detector(const MonitoringDetector& det);

double photocurrent_a(const MonitoringDetector& det, double lambda_nm, double power_w,
                      RangePolicy policy = RangePolicy::strict);

bool alarm_triggered(const MonitoringDetector& det, double lambda_nm, double power_w,
                     RangePolicy policy = RangePolicy::strict);

/// Mean photon number of a pulse (or gate window): P * duration * λ / (h c),
/// with the unreduced Planck constant.
double mean_photons(double lambda_nm, double power_w, double duration_s);

/// Gated single-photon avalanche diode. Efficiency is stored as log10(η);
/// afterpulsing follows a phenomenological single-trap model (linear in
/// absorbed photons, exponential trap decay) with fixture-default
/// amplitude/lifetime, both configuration-exposed.
struct Spad {
  SpectralCurve efficiency_log10;
  double dark_count_prob = 1e-4;
  double gate_fwhm_s = 2.5e-9;
  double gate_rate_hz = 98e3;
  double afterpulse_amplitude = 0.02;
  double trap_decay_s = 10e-6;
};

void validate_detector(const Spad& spad);

double efficiency_at(const Spad& spad, double lambda_nm,
                     RangePolicy policy = RangePolicy::strict);

/// Total click probability per gate: d + (1 − e^(−μ η(λ)))(1 − d).
double detection_probability(const Spad& spad, double lambda_nm, double mu,
                             RangePolicy policy = RangePolicy::strict);

/// Recovers η from a measured total click probability:
/// η = −ln(1 − (p_tot − d)/(1 − d)) / μ.
/// Throws NotInvertibleError when p_tot ≤ d (buried in dark counts) or ≥ 1.
double invert_efficiency(double p_tot, double dark_count_prob, double mu);

/// Spurious-click probability in a gate `gates_elapsed` gates after a pulse
/// of mean photon number `mu` was absorbed:
/// min(1, A · μ η(λ) · exp(−Δt/τ_trap)), Δt = gates_elapsed / gate_rate.
double afterpulse_probability(const Spad& spad, double lambda_nm, double mu,
                              std::uint64_t gates_elapsed,
                              RangePolicy policy = RangePolicy::strict);

/// QBER contributed by uncorrelated noise clicks: (noise/2)/(signal + noise).
double qber_contribution(double signal_click_prob, double noise_click_prob);

} // namespace thra
