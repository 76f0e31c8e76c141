#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "thra/spectral.hpp"
#include "thra/units.hpp"

namespace thra {

/// Traversal direction of a two-port device.
enum class PortDir { forward, reverse };

/// Ordered port pair of a circulator, ports numbered 1..3.
struct CirculatorHop {
  int from = 1;
  int to = 2;
  friend bool operator==(const CirculatorHop&, const CirculatorHop&) = default;
};

using Direction = std::variant<PortDir, CirculatorHop>;

Direction opposite(const Direction& dir);
std::string to_string(const Direction& dir);

/// Parses "forward", "reverse", or "N->M" (circulator port pair).
Direction parse_direction(std::string_view text);

/// A dB quantity that is either wavelength-flat or a sampled spectrum.
class DbValue {
public:
  DbValue(double flat_db) : v_(flat_db) {}
  DbValue(SpectralCurve curve) : v_(std::move(curve)) {}

  double at(double lambda_nm, RangePolicy policy = RangePolicy::strict) const;
  bool is_flat() const { return std::holds_alternative<double>(v_); }
  /// True when lambda is answerable without clamping.
  bool covers(double lambda_nm) const;
  /// Underlying curve, or nullptr for flat values.
  const SpectralCurve* curve() const { return std::get_if<SpectralCurve>(&v_); }

private:
  std::variant<double, SpectralCurve> v_;
};

// ---------------------------------------------------------------------------
// Component kinds

struct Isolator {
  SpectralCurve forward;
  SpectralCurve reverse;
};

struct Circulator {
  /// Transmission per ordered port pair. Pairs without a curve are an error
  /// at query time, never an implicit perfect block: nominally blocked paths
  /// still leak, so silence must not mean isolation.
  std::map<std::pair<int, int>, SpectralCurve> transmissions;
};

struct Connector {
  DbValue reflectivity;
  double insertion_db = kDefaultConnectorInsertionDb;
};

struct Coupler {
  double tap_ratio_db;
  double through_ratio_db;
  double excess_loss_db = 0.0;
};

/// Rectangular bandpass model: passband_loss_db inside |λ−center| ≤ fwhm/2,
/// stopband_suppression_db outside.
struct Filter {
  double center_nm;
  double passband_fwhm_nm;
  double passband_loss_db;
  double stopband_suppression_db;
};

struct FiberSegment {
  SpectralCurve attenuation_db_per_km;
  double length_km = 0.0;
};

struct GenericLoss {
  SpectralCurve loss;
};

using ComponentSpec =
    std::variant<Isolator, Circulator, Connector, Coupler, Filter, FiberSegment, GenericLoss>;

struct Component {
  std::string id;
  ComponentSpec spec;
  /// Optional back-reflection for non-connector kinds. Connectors reflect
  /// through their own reflectivity field instead.
  std::optional<DbValue> back_reflection;
};

/// Checks the structural invariants of a component (losses ≤ 0 dB, coupler
/// power conservation, stopband below passband, ...). Throws
/// InvalidCurveError or DomainError.
void validate_component(const Component& comp);

const char* kind_name(const ComponentSpec& spec);

// ---------------------------------------------------------------------------
// Queries

/// Transmission in dB for the given traversal direction.
/// Throws InvalidDirectionError when the direction kind does not match the
/// component (or a circulator pair has no curve), OutOfRangeError per policy.
double transmittance(const Component& comp, const Direction& dir, double lambda_nm,
                     RangePolicy policy = RangePolicy::strict);

/// Back-reflection in dB, or nullopt when the component reflects nothing
/// (the −∞ case is represented by absence, never by a sentinel value).
std::optional<double> reflectivity(const Component& comp, double lambda_nm,
                                   RangePolicy policy = RangePolicy::strict);

// ---------------------------------------------------------------------------
// Datasheet validation

/// Claimed figures at a design wavelength; magnitudes are positive dB
/// numbers as printed on datasheets (isolation 40 means ≥40 dB isolation).
struct DatasheetClaim {
  double design_lambda_nm;
  double min_isolation_db = 0.0;
  double max_insertion_db = 0.0;
  double min_return_loss_db = 0.0;
};

struct Violation {
  std::string quantity;
  double claimed_db;
  double measured_db;
  std::string detail;
};

/// Empty result iff every claimed figure holds at the design wavelength.
/// A claim magnitude of 0 is vacuous and never violated.
std::vector<Violation> validate_against_datasheet(const Component& comp, const DatasheetClaim& claim,
                                                  RangePolicy policy = RangePolicy::strict);

} // namespace thra
