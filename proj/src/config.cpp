#include "thra/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "thra/errors.hpp"
#include "thra/units.hpp"

namespace thra {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open file: " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

[[noreturn]] void fail(const std::string& context, const std::string& what) {
  throw ConfigError(context + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      fail(context, "unknown key '" + key + "'");
    }
  }
}

double require_number(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) fail(context, std::string("missing key '") + key + "'");
  if (!obj[key].is_number()) fail(context, std::string("key '") + key + "' must be a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(context, std::string("key '") + key + "' must be a number");
  return obj[key].get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) fail(context, std::string("missing key '") + key + "'");
  if (!obj[key].is_string()) fail(context, std::string("key '") + key + "' must be a string");
  return obj[key].get<std::string>();
}

struct CurveLoader {
  std::filesystem::path curves_dir;

  SpectralCurve operator()(const std::string& relative, const std::string& label,
                           bool passive) const {
    return load_curve_csv(curves_dir / relative, label, passive);
  }
};

DbValue load_db_value(const json& obj, const char* flat_key, const char* csv_key,
                      const CurveLoader& curves, const std::string& label, bool passive,
                      const std::string& context) {
  const bool has_flat = obj.contains(flat_key);
  const bool has_csv = obj.contains(csv_key);
  if (has_flat == has_csv) {
    fail(context, std::string("exactly one of '") + flat_key + "' or '" + csv_key + "' required");
  }
  if (has_flat) {
    if (!obj[flat_key].is_number()) fail(context, std::string(flat_key) + " must be a number");
    return DbValue(obj[flat_key].get<double>());
  }
  if (!obj[csv_key].is_string()) fail(context, std::string(csv_key) + " must be a path string");
  return DbValue(curves(obj[csv_key].get<std::string>(), label, passive));
}

Component load_component(const json& obj, const CurveLoader& curves,
                         std::vector<std::string>& warnings) {
  if (!obj.is_object()) throw ConfigError("components entries must be objects");
  const std::string id = require_string(obj, "id", "component");
  const std::string context = "component '" + id + "'";
  const std::string kind = require_string(obj, "kind", context);

  std::set<std::string> allowed = {"id", "kind"};
  const bool may_back_reflect = kind != "connector";
  if (may_back_reflect) {
    allowed.insert("back_reflection_db");
    allowed.insert("back_reflection_csv");
  }

  auto make_spec = [&]() -> ComponentSpec {
    if (kind == "isolator") {
      allowed.insert({"forward_csv", "reverse_csv"});
      reject_unknown_keys(obj, allowed, context);
      return Isolator{
          curves(require_string(obj, "forward_csv", context), id + ".forward", true),
          curves(require_string(obj, "reverse_csv", context), id + ".reverse", true)};
    }
    if (kind == "circulator") {
      allowed.insert("transmissions");
      reject_unknown_keys(obj, allowed, context);
      if (!obj.contains("transmissions") || !obj["transmissions"].is_object()) {
        fail(context, "circulator needs a 'transmissions' object");
      }
      Circulator circ;
      for (const auto& [hop_text, file] : obj["transmissions"].items()) {
        const Direction dir = parse_direction(hop_text);
        const auto hop = std::get<CirculatorHop>(dir);
        if (!file.is_string()) fail(context, "transmission '" + hop_text + "' must be a path");
        circ.transmissions.emplace(std::pair{hop.from, hop.to},
                                   curves(file.get<std::string>(), id + "." + hop_text, true));
      }
      return circ;
    }
    if (kind == "connector") {
      allowed.insert({"reflectivity_db", "reflectivity_csv", "insertion_db"});
      reject_unknown_keys(obj, allowed, context);
      Connector conn{load_db_value(obj, "reflectivity_db", "reflectivity_csv", curves,
                                   id + ".reflectivity", true, context)};
      if (obj.contains("insertion_db")) {
        conn.insertion_db = require_number(obj, "insertion_db", context);
      } else {
        char buf[120];
        std::snprintf(buf, sizeof(buf), "component '%s': insertion_db defaulted to %g dB",
                      id.c_str(), kDefaultConnectorInsertionDb);
        warnings.emplace_back(buf);
      }
      return conn;
    }
    if (kind == "coupler") {
      allowed.insert({"tap_ratio_db", "through_ratio_db", "excess_loss_db"});
      reject_unknown_keys(obj, allowed, context);
      return Coupler{require_number(obj, "tap_ratio_db", context),
                     require_number(obj, "through_ratio_db", context),
                     number_or(obj, "excess_loss_db", 0.0, context)};
    }
    if (kind == "filter") {
      allowed.insert({"center_nm", "passband_fwhm_nm", "passband_loss_db",
                      "stopband_suppression_db"});
      reject_unknown_keys(obj, allowed, context);
      return Filter{require_number(obj, "center_nm", context),
                    require_number(obj, "passband_fwhm_nm", context),
                    require_number(obj, "passband_loss_db", context),
                    require_number(obj, "stopband_suppression_db", context)};
    }
    if (kind == "fiber") {
      allowed.insert({"attenuation_csv", "length_km"});
      reject_unknown_keys(obj, allowed, context);
      return FiberSegment{
          curves(require_string(obj, "attenuation_csv", context), id + ".attenuation", true),
          require_number(obj, "length_km", context)};
    }
    if (kind == "loss") {
      allowed.insert("loss_csv");
      reject_unknown_keys(obj, allowed, context);
      return GenericLoss{curves(require_string(obj, "loss_csv", context), id + ".loss", true)};
    }
    fail(context, "unknown component kind '" + kind + "'");
  };

  Component comp{id, make_spec(), std::nullopt};
  if (may_back_reflect && (obj.contains("back_reflection_db") || obj.contains("back_reflection_csv"))) {
    comp.back_reflection = load_db_value(obj, "back_reflection_db", "back_reflection_csv", curves,
                                         id + ".back_reflection", true, context);
  }
  return comp;
}

MonitoringTap load_monitoring(const json& obj, const CurveLoader& curves) {
  const std::string context = "monitoring";
  reject_unknown_keys(obj, {"tap_point", "responsivity_log10_csv", "dark_current_a", "alarm_factor"},
                      context);
  MonitoringTap tap{
      MonitoringDetector{
          curves(require_string(obj, "responsivity_log10_csv", context), "monitor.responsivity",
                 false),
          require_number(obj, "dark_current_a", context),
          number_or(obj, "alarm_factor", 1.0, context)},
      0};
  const double idx = require_number(obj, "tap_point", context);
  if (idx < 0 || idx != std::floor(idx)) fail(context, "tap_point must be a non-negative integer");
  tap.tap_point = static_cast<std::size_t>(idx);
  return tap;
}

Spad load_spad(const json& obj, const CurveLoader& curves, std::size_t index) {
  const std::string context = "spads[" + std::to_string(index) + "]";
  reject_unknown_keys(obj,
                      {"efficiency_log10_csv", "dark_count_prob", "gate_fwhm_s", "gate_rate_hz",
                       "afterpulse_amplitude", "trap_decay_s"},
                      context);
  Spad spad{curves(require_string(obj, "efficiency_log10_csv", context),
                   "spad" + std::to_string(index) + ".efficiency", false),
            require_number(obj, "dark_count_prob", context),
            require_number(obj, "gate_fwhm_s", context),
            require_number(obj, "gate_rate_hz", context),
            require_number(obj, "afterpulse_amplitude", context),
            require_number(obj, "trap_decay_s", context)};
  return spad;
}

ProtocolParams load_protocol(const json& obj) {
  const std::string context = "protocol";
  reject_unknown_keys(obj, {"q0", "y0", "q_abort", "delta_y_max"}, context);
  ProtocolParams p;
  p.q0 = number_or(obj, "q0", p.q0, context);
  p.y0 = number_or(obj, "y0", p.y0, context);
  p.q_abort = number_or(obj, "q_abort", p.q_abort, context);
  p.delta_y_max = number_or(obj, "delta_y_max", p.delta_y_max, context);
  return p;
}

} // namespace

SpectralCurve load_curve_csv(const std::filesystem::path& path, std::string label, bool passive) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) {
    throw ConfigError("curve file not found: " + path.string());
  }
  return parse_csv(read_file(path), std::move(label), passive);
}

LoadedSystem load_system_config(const std::filesystem::path& json_path,
                                const std::optional<std::filesystem::path>& curves_dir_override) {
  const std::string bytes = read_file(json_path);
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + json_path.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  const std::string context = "config";
  reject_unknown_keys(doc,
                      {"name", "curves_dir", "components", "path", "reflection_site", "monitoring",
                       "spads", "signal_click_prob", "damage_threshold_photons",
                       "phase_separation_rad", "protocol"},
                      context);

  LoadedSystem loaded;
  loaded.config_digest = fnv1a_hex(bytes);
  SystemModel& sys = loaded.system;
  sys.name = doc.contains("name") ? require_string(doc, "name", context) : json_path.stem().string();

  std::filesystem::path curves_dir =
      curves_dir_override.value_or(json_path.parent_path() /
                                   (doc.contains("curves_dir")
                                        ? std::filesystem::path(require_string(doc, "curves_dir", context))
                                        : std::filesystem::path(".")));
  const CurveLoader curves{curves_dir};

  if (!doc.contains("components") || !doc["components"].is_array()) {
    fail(context, "missing 'components' array");
  }
  for (const auto& entry : doc["components"]) {
    Component comp = load_component(entry, curves, loaded.warnings);
    if (sys.find_component(comp.id)) {
      fail(context, "duplicate component id '" + comp.id + "'");
    }
    sys.components.push_back(std::move(comp));
  }

  if (!doc.contains("path") || !doc["path"].is_array() || doc["path"].empty()) {
    fail(context, "missing or empty 'path' array");
  }
  for (const auto& entry : doc["path"]) {
    if (!entry.is_object()) fail(context, "path entries must be objects");
    reject_unknown_keys(entry, {"id", "direction"}, "path entry");
    sys.path.push_back(PathEntry{require_string(entry, "id", "path entry"),
                                 parse_direction(require_string(entry, "direction", "path entry"))});
  }

  const double site = require_number(doc, "reflection_site", context);
  if (site < 0 || site != std::floor(site)) {
    fail(context, "reflection_site must be a non-negative integer");
  }
  sys.reflection_site = static_cast<std::size_t>(site);

  if (doc.contains("monitoring")) {
    sys.monitoring = load_monitoring(doc["monitoring"], curves);
  }
  if (doc.contains("spads")) {
    if (!doc["spads"].is_array()) fail(context, "'spads' must be an array");
    for (std::size_t i = 0; i < doc["spads"].size(); ++i) {
      sys.spads.push_back(load_spad(doc["spads"][i], curves, i));
    }
  }

  sys.signal_click_prob = number_or(doc, "signal_click_prob", sys.signal_click_prob, context);
  sys.damage_threshold_photons =
      number_or(doc, "damage_threshold_photons", sys.damage_threshold_photons, context);
  sys.phase_separation_rad =
      number_or(doc, "phase_separation_rad", sys.phase_separation_rad, context);

  if (doc.contains("protocol")) {
    loaded.protocol = load_protocol(doc["protocol"]);
    sys.qber_abort = loaded.protocol->q_abort;
  }

  validate_system(sys);
  return loaded;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

} // namespace thra
