#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thra/attack.hpp"
#include "thra/config.hpp"
#include "thra/errors.hpp"
#include "thra/report.hpp"
#include "thra/security.hpp"
#include "thra/spectral.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitInternalError = 4;

std::string read_file_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw thra::IoError("cannot open file: " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw thra::IoError("cannot write file: " + path.string());
  out << content;
}

thra::SpectralCurve load_curve_arg(const std::string& path_text) {
  const std::filesystem::path path(path_text);
  return thra::parse_csv(read_file_or_throw(path), path.stem().string());
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

struct GlobalOptions {
  bool clamp = false;
  std::string curves_dir;
  bool timestamp = false;

  thra::RangePolicy policy() const {
    return clamp ? thra::RangePolicy::clamp : thra::RangePolicy::strict;
  }
  std::optional<std::filesystem::path> curves_override() const {
    if (curves_dir.empty()) return std::nullopt;
    return std::filesystem::path(curves_dir);
  }
};

// Wavelengths the scan grid flags describe; inclusive of max up to a small
// step tolerance so "1100..1750 step 5" contains 1750.
std::vector<double> build_grid(double min_nm, double max_nm, double step_nm) {
  if (!(step_nm > 0.0)) throw thra::DomainError("grid step must be positive");
  std::vector<double> grid;
  for (double l = min_nm; l <= max_nm + step_nm * 1e-9; l += step_nm) {
    grid.push_back(l);
  }
  return grid;
}

int run_normalize(const std::string& raw_path, const std::string& ref_path,
                  const std::string& out_path) {
  const auto raw = load_curve_arg(raw_path);
  const auto ref = load_curve_arg(ref_path);
  const auto normalized = thra::normalize_to_reference(raw, ref);
  write_file(out_path, thra::emit_csv(normalized));
  std::cout << "wrote " << out_path << " (" << normalized.size() << " points)\n";
  return kExitOk;
}

int run_doublepass(const std::string& fwd_path, const std::string& rev_path,
                   const std::string& out_path) {
  const auto fwd = load_curve_arg(fwd_path);
  const auto rev = load_curve_arg(rev_path);
  const auto dp = thra::double_pass(fwd, rev);
  write_file(out_path, thra::emit_csv(dp));
  std::cout << "wrote " << out_path << " (" << dp.size() << " points)\n";
  return kExitOk;
}

struct ScanArgs {
  std::string config_path;
  double min_nm = 0.0;
  double max_nm = 0.0;
  double step_nm = 5.0;
  double target_mu = 4.0;
  double width_s = 1e-9;
  double rep_rate_hz = 1e6;
  std::string out_csv;
  std::string out_report;
};

int run_scan(const GlobalOptions& global, const ScanArgs& args, const std::string& echo) {
  const auto loaded = thra::load_system_config(args.config_path, global.curves_override());
  const auto grid = build_grid(args.min_nm, args.max_nm, args.step_nm);

  thra::AttackPulse pulse_template;
  pulse_template.width_s = args.width_s;
  pulse_template.rep_rate_hz = args.rep_rate_hz;
  pulse_template.peak_power_w = 1.0; // placeholder; the scan sets per-λ power

  const auto entries =
      thra::scan_wavelengths(loaded.system, grid, pulse_template, args.target_mu, global.policy());

  // Clamp-mode queries that actually left a curve's range are reported, since
  // they affect the numbers.
  std::vector<std::string> warnings = loaded.warnings;
  if (global.clamp) {
    for (const auto& comp : loaded.system.components) {
      for (double edge : {grid.front(), grid.back()}) {
        bool covered = true;
        if (const auto* iso = std::get_if<thra::Isolator>(&comp.spec)) {
          covered = iso->forward.covers(edge) && iso->reverse.covers(edge);
        } else if (const auto* gl = std::get_if<thra::GenericLoss>(&comp.spec)) {
          covered = gl->loss.covers(edge);
        } else if (const auto* circ = std::get_if<thra::Circulator>(&comp.spec)) {
          for (const auto& [hop, curve] : circ->transmissions) {
            (void)hop;
            covered = covered && curve.covers(edge);
          }
        } else if (const auto* fib = std::get_if<thra::FiberSegment>(&comp.spec)) {
          covered = fib->attenuation_db_per_km.covers(edge);
        }
        if (!covered) {
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "component '%s' clamped to curve edge near %g nm", comp.id.c_str(), edge);
          warnings.emplace_back(buf);
          break;
        }
      }
    }
  }
  thra::LoadedSystem annotated = loaded;
  annotated.warnings = warnings;

  const std::optional<std::string> stamp =
      global.timestamp ? std::optional<std::string>(utc_now()) : std::nullopt;
  const std::string report = thra::render_scan_report(annotated, echo, args.target_mu,
                                                      pulse_template, entries, stamp);
  if (!args.out_csv.empty()) write_file(args.out_csv, thra::render_scan_csv(entries));
  if (!args.out_report.empty()) {
    write_file(args.out_report, report);
  }
  std::cout << report;
  return kExitOk;
}

struct EvaluateArgs {
  std::string config_path;
  thra::AttackObservation obs;
  bool pa_given = false;
  bool use_asymptotic_pa = false;
  std::optional<double> q0, y0, q_abort, delta_y_max;
};

int run_evaluate(const GlobalOptions& global, const EvaluateArgs& args) {
  thra::ProtocolParams params;
  if (!args.config_path.empty()) {
    const auto loaded = thra::load_system_config(args.config_path, global.curves_override());
    if (loaded.protocol) params = *loaded.protocol;
  }
  if (args.q0) params.q0 = *args.q0;
  if (args.y0) params.y0 = *args.y0;
  if (args.q_abort) params.q_abort = *args.q_abort;
  if (args.delta_y_max) params.delta_y_max = *args.delta_y_max;

  thra::AttackObservation obs = args.obs;
  if (!args.pa_given) {
    if (!args.use_asymptotic_pa) {
      throw thra::InvalidObservationError(
          "need --pa-fraction (or --asymptotic-pa to use the BB84 asymptotic bound)");
    }
    obs.pa_subtraction_fraction = thra::asymptotic_bb84_pa_fraction(obs.q1);
  }

  const auto verdict = thra::breach_verdict(params, obs);
  std::cout << thra::render_verdict_report(params, obs, verdict);
  return kExitOk;
}

struct ValidateArgs {
  std::string config_path;
  std::string component_id;
  thra::DatasheetClaim claim{1550.0, 0.0, 0.0, 0.0};
};

int run_validate(const GlobalOptions& global, const ValidateArgs& args) {
  const auto loaded = thra::load_system_config(args.config_path, global.curves_override());
  const thra::Component* comp = loaded.system.find_component(args.component_id);
  if (!comp) {
    throw thra::ConfigError("no component '" + args.component_id + "' in system '" +
                            loaded.system.name + "'");
  }
  const auto violations = thra::validate_against_datasheet(*comp, args.claim, global.policy());
  std::cout << thra::render_violations_report(comp->id, args.claim, violations);
  return kExitOk;
}

std::string join_args(int argc, char** argv) {
  std::string echo;
  for (int i = 1; i < argc; ++i) {
    if (!echo.empty()) echo += ' ';
    echo += argv[i];
  }
  return echo;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelength-resolved Trojan-horse risk analysis for fiber-optic QKD subsystems"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_flag("--clamp", global.clamp,
               "Clamp out-of-range wavelength queries to curve edges instead of failing");
  app.add_option("--curves-dir", global.curves_dir, "Override the config's curve directory");
  app.add_flag("--timestamp", global.timestamp, "Include a generation timestamp in reports");

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Normalize a raw trace against a reference");
  std::string raw_path, ref_path, out_path;
  normalize->add_option("raw", raw_path, "Raw trace CSV")->required();
  normalize->add_option("reference", ref_path, "Reference trace CSV")->required();
  normalize->add_option("out", out_path, "Output CSV")->required();

  // doublepass
  auto* doublepass = app.add_subcommand("doublepass", "Compose forward and reverse traversals");
  std::string dp_fwd, dp_rev, dp_out;
  doublepass->add_option("forward", dp_fwd, "Forward transmittance CSV")->required();
  doublepass->add_option("reverse", dp_rev, "Reverse transmittance CSV")->required();
  doublepass->add_option("out", dp_out, "Output CSV")->required();

  // scan
  auto* scan = app.add_subcommand("scan", "Rank attack wavelengths for a system config");
  ScanArgs scan_args;
  scan->add_option("--config", scan_args.config_path, "System JSON config")->required();
  scan->add_option("--min", scan_args.min_nm, "Grid start (nm)")->required();
  scan->add_option("--max", scan_args.max_nm, "Grid end (nm)")->required();
  scan->add_option("--step", scan_args.step_nm, "Grid step (nm)");
  scan->add_option("--target-mu", scan_args.target_mu, "Back-reflected photons Eve needs");
  scan->add_option("--width", scan_args.width_s, "Pulse width (s)");
  scan->add_option("--rep-rate", scan_args.rep_rate_hz, "Pulse repetition rate (Hz)");
  scan->add_option("--out-csv", scan_args.out_csv, "Write the ranked table as CSV");
  scan->add_option("--report", scan_args.out_report, "Write the text report to a file");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Protocol-level breach verdict");
  EvaluateArgs eval_args;
  double pa_fraction = 0.0;
  double q0 = 0, y0 = 0, q_abort = 0, dymax = 0;
  evaluate->add_option("--config", eval_args.config_path, "System JSON config (protocol block)");
  evaluate->add_option("--q1", eval_args.obs.q1, "QBER observed under attack")->required();
  evaluate->add_option("--y1", eval_args.obs.y1, "Single-pair fraction under attack")->required();
  evaluate->add_option("--eve-knowledge", eval_args.obs.eve_knowledge_fraction,
                       "Eve's correlation with the corrected key")->required();
  auto* pa_opt = evaluate->add_option("--pa-fraction", pa_fraction,
                                      "Privacy-amplification subtraction fraction");
  evaluate->add_flag("--asymptotic-pa", eval_args.use_asymptotic_pa,
                     "Derive the PA fraction from the asymptotic BB84 bound 1-2*h2(q1)");
  auto* q0_opt = evaluate->add_option("--q0", q0, "Baseline QBER");
  auto* y0_opt = evaluate->add_option("--y0", y0, "Baseline single-pair fraction");
  auto* qa_opt = evaluate->add_option("--q-abort", q_abort, "Abort threshold QBER");
  auto* dy_opt = evaluate->add_option("--delta-y-max", dymax, "Tolerated variation of y");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a component against datasheet claims");
  ValidateArgs val_args;
  validate->add_option("--config", val_args.config_path, "System JSON config")->required();
  validate->add_option("--component", val_args.component_id, "Component id")->required();
  validate->add_option("--lambda", val_args.claim.design_lambda_nm, "Design wavelength (nm)")
      ->required();
  validate->add_option("--min-isolation", val_args.claim.min_isolation_db,
                       "Claimed minimum isolation (dB, magnitude)");
  validate->add_option("--max-insertion", val_args.claim.max_insertion_db,
                       "Claimed maximum insertion loss (dB, magnitude)");
  validate->add_option("--min-return-loss", val_args.claim.min_return_loss_db,
                       "Claimed minimum return loss (dB, magnitude)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*normalize) return run_normalize(raw_path, ref_path, out_path);
    if (*doublepass) return run_doublepass(dp_fwd, dp_rev, dp_out);
    if (*scan) return run_scan(global, scan_args, join_args(argc, argv));
    if (*evaluate) {
      eval_args.pa_given = pa_opt->count() > 0;
      if (eval_args.pa_given) eval_args.obs.pa_subtraction_fraction = pa_fraction;
      if (q0_opt->count()) eval_args.q0 = q0;
      if (y0_opt->count()) eval_args.y0 = y0;
      if (qa_opt->count()) eval_args.q_abort = q_abort;
      if (dy_opt->count()) eval_args.delta_y_max = dymax;
      return run_evaluate(global, eval_args);
    }
    if (*validate) return run_validate(global, val_args);
  } catch (const thra::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const thra::InvalidDirectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const thra::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitInternalError;
}
