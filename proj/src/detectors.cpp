#include "thra/detectors.hpp"

#include <cmath>
#include <string>

#include "thra/errors.hpp"
#include "thra/units.hpp"

namespace thra {

void validate_detector(const MonitoringDetector& det) {
  if (!(det.dark_current_a > 0.0)) {
    throw DomainError("monitoring detector: dark current must be positive");
  }
  if (!(det.alarm_factor >= 1.0)) {
    throw DomainError("monitoring detector: alarm factor must be >= 1");
  }
}

double photocurrent_a(const MonitoringDetector& det, double lambda_nm, double power_w,
                      RangePolicy policy) {
  if (power_w < 0.0) {
    throw DomainError("photocurrent: negative optical power");
  }
  const double rho = std::pow(10.0, det.responsivity_log10.value_at(lambda_nm, policy));
  return rho * power_w;
}

bool alarm_triggered(const MonitoringDetector& det, double lambda_nm, double power_w,
                     RangePolicy policy) {
  return photocurrent_a(det, lambda_nm, power_w, policy) >=
         det.alarm_factor * det.dark_current_a;
}

double mean_photons(double lambda_nm, double power_w, double duration_s) {
  if (lambda_nm < 0.0 || power_w < 0.0 || duration_s < 0.0) {
    throw DomainError("mean_photons: arguments must be non-negative");
  }
  return power_w * duration_s * (lambda_nm * 1e-9) / (kPlanckJs * kSpeedOfLightMps);
}

void validate_detector(const Spad& spad) {
  if (!(spad.dark_count_prob > 0.0 && spad.dark_count_prob < 1.0)) {
    throw DomainError("spad: dark count probability must be in (0,1)");
  }
  if (!(spad.gate_fwhm_s > 0.0)) throw DomainError("spad: gate width must be positive");
  if (!(spad.gate_rate_hz > 0.0)) throw DomainError("spad: gate rate must be positive");
  if (spad.afterpulse_amplitude < 0.0) {
    throw DomainError("spad: afterpulse amplitude must be non-negative");
  }
  if (!(spad.trap_decay_s > 0.0)) throw DomainError("spad: trap lifetime must be positive");
  // η(λ) ∈ (0,1]: log10 values must be ≤ 0 (and finite, from curve construction).
  for (double v : spad.efficiency_log10.values_db()) {
    if (v > 0.0) throw DomainError("spad: efficiency above 1");
  }
}

double efficiency_at(const Spad& spad, double lambda_nm, RangePolicy policy) {
  return std::pow(10.0, spad.efficiency_log10.value_at(lambda_nm, policy));
}

double detection_probability(const Spad& spad, double lambda_nm, double mu, RangePolicy policy) {
  if (mu < 0.0) throw DomainError("detection_probability: negative mean photon number");
  const double eta = efficiency_at(spad, lambda_nm, policy);
  const double p_photon = -std::expm1(-mu * eta);
  return spad.dark_count_prob + p_photon * (1.0 - spad.dark_count_prob);
}

double invert_efficiency(double p_tot, double dark_count_prob, double mu) {
  if (!(dark_count_prob > 0.0 && dark_count_prob < 1.0)) {
    throw DomainError("invert_efficiency: dark count probability must be in (0,1)");
  }
  if (!(mu > 0.0)) throw DomainError("invert_efficiency: mean photon number must be positive");
  if (p_tot <= dark_count_prob) {
    throw NotInvertibleError("click probability " + std::to_string(p_tot) +
                             " not above dark count probability; signal is buried");
  }
  if (p_tot >= 1.0) {
    throw NotInvertibleError("click probability must be below 1");
  }
  const double p_photon = (p_tot - dark_count_prob) / (1.0 - dark_count_prob);
  return -std::log1p(-p_photon) / mu;
}

double afterpulse_probability(const Spad& spad, double lambda_nm, double mu,
                              std::uint64_t gates_elapsed, RangePolicy policy) {
  if (mu < 0.0) throw DomainError("afterpulse_probability: negative mean photon number");
  const double absorbed = mu * efficiency_at(spad, lambda_nm, policy);
  const double dt = static_cast<double>(gates_elapsed) / spad.gate_rate_hz;
  const double p = spad.afterpulse_amplitude * absorbed * std::exp(-dt / spad.trap_decay_s);
  return std::min(1.0, p);
}

double qber_contribution(double signal_click_prob, double noise_click_prob) {
  if (signal_click_prob < 0.0 || signal_click_prob >= 1.0 || noise_click_prob < 0.0 ||
      noise_click_prob >= 1.0) {
    throw DomainError("qber_contribution: click probabilities must be in [0,1)");
  }
  if (signal_click_prob == 0.0 && noise_click_prob == 0.0) {
    throw DomainError("qber_contribution: no clicks at all");
  }
  return 0.5 * noise_click_prob / (signal_click_prob + noise_click_prob);
}

} // namespace thra
