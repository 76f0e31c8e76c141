#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thra/attack.hpp"
#include "thra/security.hpp"

namespace thra {

/// A system model loaded from its JSON document, together with everything a
/// report needs to echo: load-time warnings (e.g. defaulted values) and a
/// digest of the raw config bytes.
struct LoadedSystem {
  SystemModel system;
  std::optional<ProtocolParams> protocol;
  std::vector<std::string> warnings;
  std::string config_digest;
};

/// Reads a spectral curve CSV from disk. Throws ConfigError when the file is
/// missing, parse errors otherwise.
SpectralCurve load_curve_csv(const std::filesystem::path& path, std::string label,
                             bool passive = false);

/// Parses and validates a system configuration document. Field names are
/// normative; unknown keys are rejected rather than ignored so that typos
/// cannot silently weaken a safeguard. `curves_dir_override` replaces the
/// document's curves_dir when given.
LoadedSystem load_system_config(const std::filesystem::path& json_path,
                                const std::optional<std::filesystem::path>& curves_dir_override = {});

/// FNV-1a 64-bit digest, stable across platforms; used for config echo.
std::string fnv1a_hex(std::string_view bytes);

} // namespace thra
