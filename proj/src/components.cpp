#include "thra/components.hpp"

#include <cmath>
#include <cstdio>

#include "thra/errors.hpp"

namespace thra {

Direction opposite(const Direction& dir) {
  if (const auto* pd = std::get_if<PortDir>(&dir)) {
    return *pd == PortDir::forward ? PortDir::reverse : PortDir::forward;
  }
  const auto hop = std::get<CirculatorHop>(dir);
  return CirculatorHop{hop.to, hop.from};
}

std::string to_string(const Direction& dir) {
  if (const auto* pd = std::get_if<PortDir>(&dir)) {
    return *pd == PortDir::forward ? "forward" : "reverse";
  }
  const auto hop = std::get<CirculatorHop>(dir);
  return std::to_string(hop.from) + "->" + std::to_string(hop.to);
}

Direction parse_direction(std::string_view text) {
  if (text == "forward") return PortDir::forward;
  if (text == "reverse") return PortDir::reverse;
  const std::size_t arrow = text.find("->");
  if (arrow != std::string_view::npos && arrow == 1 && text.size() == 4) {
    const int from = text[0] - '0';
    const int to = text[3] - '0';
    if (from >= 1 && from <= 3 && to >= 1 && to <= 3 && from != to) {
      return CirculatorHop{from, to};
    }
  }
  throw InvalidDirectionError("unrecognized direction '" + std::string(text) +
                              "' (expected 'forward', 'reverse', or 'N->M' with ports 1..3)");
}

double DbValue::at(double lambda_nm, RangePolicy policy) const {
  if (const auto* flat = std::get_if<double>(&v_)) return *flat;
  return std::get<SpectralCurve>(v_).value_at(lambda_nm, policy);
}

bool DbValue::covers(double lambda_nm) const {
  if (std::holds_alternative<double>(v_)) return true;
  return std::get<SpectralCurve>(v_).covers(lambda_nm);
}

namespace {

void require_passive(const SpectralCurve& c, const std::string& id, const char* what) {
  for (double v : c.values_db()) {
    if (v > 0.0) {
      throw InvalidCurveError("component '" + id + "': " + what + " exceeds 0 dB");
    }
  }
}

void require_nonpositive(double v, const std::string& id, const char* what) {
  if (!(v <= 0.0)) {
    throw DomainError("component '" + id + "': " + what + " must be <= 0 dB, got " +
                      std::to_string(v));
  }
}

} // namespace

void validate_component(const Component& comp) {
  const std::string& id = comp.id;
  std::visit(
      [&](const auto& spec) {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Isolator>) {
          require_passive(spec.forward, id, "forward transmittance");
          require_passive(spec.reverse, id, "reverse transmittance");
        } else if constexpr (std::is_same_v<T, Circulator>) {
          if (spec.transmissions.empty()) {
            throw DomainError("component '" + id + "': circulator has no transmission curves");
          }
          for (const auto& [pair, curve] : spec.transmissions) {
            if (pair.first < 1 || pair.first > 3 || pair.second < 1 || pair.second > 3 ||
                pair.first == pair.second) {
              throw DomainError("component '" + id + "': invalid circulator port pair");
            }
            require_passive(curve, id, "circulator transmittance");
          }
        } else if constexpr (std::is_same_v<T, Connector>) {
          require_nonpositive(spec.insertion_db, id, "insertion loss");
          if (spec.reflectivity.is_flat()) {
            require_nonpositive(spec.reflectivity.at(0.0), id, "reflectivity");
          } else {
            require_passive(*spec.reflectivity.curve(), id, "reflectivity");
          }
        } else if constexpr (std::is_same_v<T, Coupler>) {
          require_nonpositive(spec.tap_ratio_db, id, "tap ratio");
          require_nonpositive(spec.through_ratio_db, id, "through ratio");
          require_nonpositive(spec.excess_loss_db, id, "excess loss");
          const double total = db_to_linear(spec.tap_ratio_db) + db_to_linear(spec.through_ratio_db);
          if (total > 1.0 + 1e-12) {
            throw DomainError("component '" + id + "': coupler splits more power than it receives (" +
                              std::to_string(total) + ")");
          }
        } else if constexpr (std::is_same_v<T, Filter>) {
          if (!(spec.passband_fwhm_nm > 0.0)) {
            throw DomainError("component '" + id + "': filter passband width must be positive");
          }
          require_nonpositive(spec.passband_loss_db, id, "passband loss");
          require_nonpositive(spec.stopband_suppression_db, id, "stopband suppression");
          if (spec.stopband_suppression_db > spec.passband_loss_db) {
            throw DomainError("component '" + id + "': stopband suppression above passband loss");
          }
        } else if constexpr (std::is_same_v<T, FiberSegment>) {
          require_passive(spec.attenuation_db_per_km, id, "fiber attenuation");
          if (spec.length_km < 0.0) {
            throw DomainError("component '" + id + "': negative fiber length");
          }
        } else if constexpr (std::is_same_v<T, GenericLoss>) {
          require_passive(spec.loss, id, "loss");
        }
      },
      comp.spec);

  if (comp.back_reflection) {
    if (std::holds_alternative<Connector>(comp.spec)) {
      throw DomainError("component '" + id +
                        "': connectors reflect through their reflectivity field, not back_reflection");
    }
    if (comp.back_reflection->is_flat()) {
      require_nonpositive(comp.back_reflection->at(0.0), id, "back-reflection");
    } else {
      require_passive(*comp.back_reflection->curve(), id, "back-reflection");
    }
  }
}

const char* kind_name(const ComponentSpec& spec) {
  struct Visitor {
    const char* operator()(const Isolator&) const { return "isolator"; }
    const char* operator()(const Circulator&) const { return "circulator"; }
    const char* operator()(const Connector&) const { return "connector"; }
    const char* operator()(const Coupler&) const { return "coupler"; }
    const char* operator()(const Filter&) const { return "filter"; }
    const char* operator()(const FiberSegment&) const { return "fiber"; }
    const char* operator()(const GenericLoss&) const { return "loss"; }
  };
  return std::visit(Visitor{}, spec);
}

namespace {

const PortDir* as_two_port(const Direction& dir) { return std::get_if<PortDir>(&dir); }

[[noreturn]] void direction_mismatch(const Component& comp, const Direction& dir) {
  throw InvalidDirectionError("component '" + comp.id + "' (" + kind_name(comp.spec) +
                              ") cannot be traversed as '" + to_string(dir) + "'");
}

} // namespace

double transmittance(const Component& comp, const Direction& dir, double lambda_nm,
                     RangePolicy policy) {
  return std::visit(
      [&](const auto& spec) -> double {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, Isolator>) {
          const auto* pd = as_two_port(dir);
          if (!pd) direction_mismatch(comp, dir);
          return (*pd == PortDir::forward ? spec.forward : spec.reverse)
              .value_at(lambda_nm, policy);
        } else if constexpr (std::is_same_v<T, Circulator>) {
          const auto* hop = std::get_if<CirculatorHop>(&dir);
          if (!hop) direction_mismatch(comp, dir);
          const auto it = spec.transmissions.find({hop->from, hop->to});
          if (it == spec.transmissions.end()) {
            throw InvalidDirectionError("component '" + comp.id + "': no transmission curve for '" +
                                        to_string(dir) + "' and blocked paths still leak, so none is assumed");
          }
          return it->second.value_at(lambda_nm, policy);
        } else if constexpr (std::is_same_v<T, Connector>) {
          if (!as_two_port(dir)) direction_mismatch(comp, dir);
          return spec.insertion_db;
        } else if constexpr (std::is_same_v<T, Coupler>) {
          if (!as_two_port(dir)) direction_mismatch(comp, dir);
          return spec.through_ratio_db + spec.excess_loss_db;
        } else if constexpr (std::is_same_v<T, Filter>) {
          if (!as_two_port(dir)) direction_mismatch(comp, dir);
          return std::abs(lambda_nm - spec.center_nm) <= spec.passband_fwhm_nm / 2.0
                     ? spec.passband_loss_db
                     : spec.stopband_suppression_db;
        } else if constexpr (std::is_same_v<T, FiberSegment>) {
          if (!as_two_port(dir)) direction_mismatch(comp, dir);
          return spec.attenuation_db_per_km.value_at(lambda_nm, policy) * spec.length_km;
        } else {
          static_assert(std::is_same_v<T, GenericLoss>);
          if (!as_two_port(dir)) direction_mismatch(comp, dir);
          return spec.loss.value_at(lambda_nm, policy);
        }
      },
      comp.spec);
}

std::optional<double> reflectivity(const Component& comp, double lambda_nm, RangePolicy policy) {
  if (const auto* conn = std::get_if<Connector>(&comp.spec)) {
    return conn->reflectivity.at(lambda_nm, policy);
  }
  if (comp.back_reflection) {
    return comp.back_reflection->at(lambda_nm, policy);
  }
  return std::nullopt;
}

namespace {

void check_isolation(std::vector<Violation>& out, const DatasheetClaim& claim, double measured_db,
                     const std::string& where) {
  if (claim.min_isolation_db <= 0.0) return;
  if (std::abs(measured_db) < claim.min_isolation_db) {
    out.push_back({"isolation", claim.min_isolation_db, measured_db,
                   where + ": |" + std::to_string(measured_db) + "| dB below claimed minimum"});
  }
}

void check_insertion(std::vector<Violation>& out, const DatasheetClaim& claim, double measured_db,
                     const std::string& where) {
  if (claim.max_insertion_db <= 0.0) return;
  if (std::abs(measured_db) > claim.max_insertion_db) {
    out.push_back({"insertion_loss", claim.max_insertion_db, measured_db,
                   where + ": |" + std::to_string(measured_db) + "| dB above claimed maximum"});
  }
}

} // namespace

std::vector<Violation> validate_against_datasheet(const Component& comp, const DatasheetClaim& claim,
                                                  RangePolicy policy) {
  if (!(claim.design_lambda_nm > 0.0) || claim.min_isolation_db < 0.0 ||
      claim.max_insertion_db < 0.0 || claim.min_return_loss_db < 0.0) {
    throw DomainError("datasheet claim magnitudes must be non-negative");
  }
  const double lambda = claim.design_lambda_nm;
  std::vector<Violation> out;

  if (const auto* iso = std::get_if<Isolator>(&comp.spec)) {
    (void)iso;
    check_isolation(out, claim, transmittance(comp, PortDir::reverse, lambda, policy), "reverse");
    check_insertion(out, claim, transmittance(comp, PortDir::forward, lambda, policy), "forward");
  } else if (const auto* circ = std::get_if<Circulator>(&comp.spec)) {
    // Favored hops: 1->2, 2->3. Blocked hops: the reverses of those.
    for (const auto& [pair, curve] : circ->transmissions) {
      (void)curve;
      const Direction dir = CirculatorHop{pair.first, pair.second};
      const double t = transmittance(comp, dir, lambda, policy);
      const bool favored = (pair.first == 1 && pair.second == 2) ||
                           (pair.first == 2 && pair.second == 3);
      const bool blocked = (pair.first == 2 && pair.second == 1) ||
                           (pair.first == 3 && pair.second == 2);
      if (favored) check_insertion(out, claim, t, to_string(dir));
      if (blocked) check_isolation(out, claim, t, to_string(dir));
    }
  } else {
    // Other kinds have no isolation figure; insertion still applies.
    check_insertion(out, claim, transmittance(comp, PortDir::forward, lambda, policy), "forward");
  }

  if (claim.min_return_loss_db > 0.0) {
    if (const auto refl = reflectivity(comp, lambda, policy)) {
      if (std::abs(*refl) < claim.min_return_loss_db) {
        out.push_back({"return_loss", claim.min_return_loss_db, *refl,
                       "back-reflection stronger than claimed return loss"});
      }
    }
  }
  return out;
}

} // namespace thra
