#pragma once

#include <optional>
#include <span>
#include <string>

#include "thra/attack.hpp"
#include "thra/config.hpp"
#include "thra/security.hpp"

namespace thra {

/// Plot-ready CSV for a ranked scan, one row per grid point in rank order.
std::string render_scan_csv(std::span<const ScanEntry> entries);

/// Human-readable scan summary. Deterministic: identical inputs yield
/// byte-identical text; the timestamp line appears only when supplied.
std::string render_scan_report(const LoadedSystem& loaded, const std::string& command_echo,
                               double target_mu, const AttackPulse& pulse_template,
                               std::span<const ScanEntry> entries,
                               const std::optional<std::string>& timestamp = {});

std::string render_verdict_report(const ProtocolParams& params, const AttackObservation& obs,
                                  const BreachVerdict& verdict);

std::string render_violations_report(const std::string& component_id, const DatasheetClaim& claim,
                                     std::span<const Violation> violations);

} // namespace thra
