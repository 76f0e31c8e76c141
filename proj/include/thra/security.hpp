#pragma once

namespace thra {

/// Post-processing thresholds of the protocol under analysis.
struct ProtocolParams {
  double q0 = 0.01;          // baseline QBER
  double y0 = 0.70;          // baseline single-pair fraction
  double q_abort = 0.11;     // QBER above which the protocol aborts
  double delta_y_max = 0.15; // tolerated relative variation of y
};

/// What the legitimate parties observe while the attack runs, plus how much
/// the attacker actually learned. The privacy-amplification subtraction
/// fraction is an input here; computing it belongs to the security proof,
/// not to this tool.
struct AttackObservation {
  double q1 = 0.0;
  double y1 = 0.0;
  double eve_knowledge_fraction = 0.0;
  double pa_subtraction_fraction = 0.0;
};

struct BreachMargins {
  double qber_margin;    // q_abort − q1
  double delta_y_margin; // delta_y_max − δy
  double pa_margin;      // eve_knowledge − pa_subtraction
};

struct BreachVerdict {
  bool undetected;
  bool pa_defeated;
  bool breach;
  double delta_y;
  BreachMargins margins;
};

/// Relative variation of the single-pair fraction: |y1/y0 − 1|.
double delta_y(double y0, double y1);

/// Strict comparisons throughout: a value sitting exactly on a threshold
/// counts as detected (or as PA holding), which favors the defender.
/// Throws InvalidObservationError on parameter/observation range violations.
BreachVerdict breach_verdict(const ProtocolParams& params, const AttackObservation& obs);

/// Convenience asymptotic BB84 bound 1 − 2·h2(q1) for the PA subtraction
/// fraction. This is NOT the proof-specific quantity consumed by
/// AttackObservation; it exists only for quick what-if runs.
double asymptotic_bb84_pa_fraction(double q1);

} // namespace thra
