#pragma once

#include <cmath>

namespace thra {

inline constexpr double kPlanckJs = 6.62607015e-34;
inline constexpr double kSpeedOfLightMps = 299792458.0;

/// Stand-in attenuation for total extinction. Used by fixtures and tests to
/// model a perfect blocker; never produced by a physical measurement.
inline constexpr double kTotalExtinctionDb = -400.0;

/// Default insertion loss assumed for a connector when the configuration
/// omits it (typical mated FC/PC value).
inline constexpr double kDefaultConnectorInsertionDb = -0.3;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

/// Energy of one photon at the given vacuum wavelength, in joules.
inline double photon_energy_j(double lambda_nm) {
  return kPlanckJs * kSpeedOfLightMps / (lambda_nm * 1e-9);
}

} // namespace thra
