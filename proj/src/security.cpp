#include "thra/security.hpp"

#include <cmath>
#include <string>

#include "thra/errors.hpp"

namespace thra {

double delta_y(double y0, double y1) {
  if (!(y0 > 0.0)) throw InvalidObservationError("delta_y: baseline y0 must be positive");
  return std::abs(y1 / y0 - 1.0);
}

namespace {

void check(bool cond, const char* what) {
  if (!cond) throw InvalidObservationError(std::string("breach_verdict: ") + what);
}

} // namespace

BreachVerdict breach_verdict(const ProtocolParams& params, const AttackObservation& obs) {
  check(params.q0 >= 0.0 && params.q0 < params.q_abort && params.q_abort < 0.5,
        "need 0 <= q0 < q_abort < 0.5");
  check(params.y0 > 0.0 && params.y0 <= 1.0, "need 0 < y0 <= 1");
  check(params.delta_y_max > 0.0, "need delta_y_max > 0");
  check(obs.q1 >= 0.0 && obs.q1 < 0.5, "need 0 <= q1 < 0.5");
  check(obs.eve_knowledge_fraction >= 0.0 && obs.eve_knowledge_fraction <= 1.0,
        "eve knowledge fraction outside [0,1]");
  check(obs.pa_subtraction_fraction >= 0.0 && obs.pa_subtraction_fraction <= 1.0,
        "pa subtraction fraction outside [0,1]");

  const double dy = delta_y(params.y0, obs.y1);
  BreachVerdict v{};
  v.delta_y = dy;
  v.undetected = obs.q1 < params.q_abort && dy < params.delta_y_max;
  v.pa_defeated = obs.eve_knowledge_fraction > obs.pa_subtraction_fraction;
  v.breach = v.undetected && v.pa_defeated;
  v.margins.qber_margin = params.q_abort - obs.q1;
  v.margins.delta_y_margin = params.delta_y_max - dy;
  v.margins.pa_margin = obs.eve_knowledge_fraction - obs.pa_subtraction_fraction;
  return v;
}

double asymptotic_bb84_pa_fraction(double q1) {
  if (q1 < 0.0 || q1 >= 0.5) {
    throw InvalidObservationError("asymptotic_bb84_pa_fraction: q1 must be in [0, 0.5)");
  }
  auto h2 = [](double x) {
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
  };
  return 1.0 - 2.0 * h2(q1);
}

} // namespace thra
