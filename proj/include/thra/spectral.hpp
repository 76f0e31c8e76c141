#pragma once

#include <span>
#include <string>
#include <vector>

namespace thra {

/// Behaviour of wavelength queries outside a curve's sampled range.
/// Strict queries throw OutOfRangeError; clamping returns the edge value.
/// Clamping is opt-in because silently extrapolating an isolation curve
/// would fabricate attenuation numbers.
enum class RangePolicy { strict, clamp };

/// An immutable sampled spectrum: strictly ascending wavelengths (nm) mapped
/// to values in dB relative to unity transmission/reflection.
///
/// Curves flagged `passive` describe passive optics and reject any value
/// above 0 dB at construction. All algebra (composition, normalization)
/// happens in the dB domain; convert with db_to_linear() only when a power
/// or photon count is needed.
class SpectralCurve {
public:
  /// Throws TooFewPointsError (<2 samples), InvalidCurveError (non-finite
  /// values, unordered grid, or positive values on a passive curve).
  SpectralCurve(std::vector<double> wavelengths_nm, std::vector<double> values_db,
                std::string label = {}, bool passive = false);

  /// Piecewise-linear interpolation in the dB domain. Exact at grid points.
  double value_at(double lambda_nm, RangePolicy policy = RangePolicy::strict) const;

  double min_wavelength_nm() const { return wavelengths_nm_.front(); }
  double max_wavelength_nm() const { return wavelengths_nm_.back(); }
  bool covers(double lambda_nm) const {
    return lambda_nm >= min_wavelength_nm() && lambda_nm <= max_wavelength_nm();
  }

  std::span<const double> wavelengths_nm() const { return wavelengths_nm_; }
  std::span<const double> values_db() const { return values_db_; }
  std::size_t size() const { return wavelengths_nm_.size(); }
  const std::string& label() const { return label_; }
  bool passive() const { return passive_; }

private:
  std::vector<double> wavelengths_nm_;
  std::vector<double> values_db_;
  std::string label_;
  bool passive_ = false;
};

/// raw(λ) − reference(λ) in dB, on the raw grid restricted to the overlap.
/// Throws NoOverlapError when the grids share no interval (or fewer than two
/// raw samples fall inside it).
SpectralCurve normalize_to_reference(const SpectralCurve& raw, const SpectralCurve& reference);

/// Pointwise dB sum of the curves on their common grid (union of all sample
/// points inside the overlap). Throws NoOverlapError; a single curve
/// composes to itself.
SpectralCurve compose_serial(std::span<const SpectralCurve> curves);

/// Net attenuation of a forward-then-reverse traversal: the quantity an
/// attacker probing back-reflections actually sees.
SpectralCurve double_pass(const SpectralCurve& forward, const SpectralCurve& reverse);

/// Parses the `wavelength_nm,value_db` CSV format. `#` comment lines and
/// blank lines are skipped; rows may arrive unsorted and are sorted on load.
/// Throws MalformedRowError, DuplicateWavelengthError, TooFewPointsError.
SpectralCurve parse_csv(std::string_view text, std::string label = {}, bool passive = false);

/// Emits the CSV format parse_csv accepts. emit→parse round-trips each value
/// to within 1e-9.
std::string emit_csv(const SpectralCurve& curve);

} // namespace thra
