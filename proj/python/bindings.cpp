#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "thra/attack.hpp"
#include "thra/config.hpp"
#include "thra/detectors.hpp"
#include "thra/security.hpp"
#include "thra/spectral.hpp"
#include "thra/units.hpp"

namespace py = pybind11;
using namespace thra;

namespace {

RangePolicy policy(bool clamp) { return clamp ? RangePolicy::clamp : RangePolicy::strict; }

} // namespace

PYBIND11_MODULE(_thra, m) {
  m.doc() = "Wavelength-resolved Trojan-horse risk analysis for fiber-optic QKD subsystems";

  py::class_<SpectralCurve>(m, "SpectralCurve")
      .def(py::init<std::vector<double>, std::vector<double>, std::string, bool>(),
           py::arg("wavelengths_nm"), py::arg("values_db"), py::arg("label") = "",
           py::arg("passive") = false)
      .def("value_at",
           [](const SpectralCurve& c, double lambda_nm, bool clamp) {
             return c.value_at(lambda_nm, policy(clamp));
           },
           py::arg("lambda_nm"), py::arg("clamp") = false)
      .def_property_readonly("wavelengths_nm",
                             [](const SpectralCurve& c) {
                               return std::vector<double>(c.wavelengths_nm().begin(),
                                                          c.wavelengths_nm().end());
                             })
      .def_property_readonly("values_db",
                             [](const SpectralCurve& c) {
                               return std::vector<double>(c.values_db().begin(),
                                                          c.values_db().end());
                             })
      .def_property_readonly("label", &SpectralCurve::label)
      .def_property_readonly("passive", &SpectralCurve::passive)
      .def_property_readonly("min_wavelength_nm", &SpectralCurve::min_wavelength_nm)
      .def_property_readonly("max_wavelength_nm", &SpectralCurve::max_wavelength_nm)
      .def("__len__", &SpectralCurve::size);

  m.def("parse_csv", &parse_csv, py::arg("text"), py::arg("label") = "",
        py::arg("passive") = false);
  m.def("emit_csv", &emit_csv, py::arg("curve"));
  m.def("load_curve_csv", &load_curve_csv, py::arg("path"), py::arg("label") = "",
        py::arg("passive") = false);
  m.def("normalize_to_reference", &normalize_to_reference, py::arg("raw"), py::arg("reference"));
  m.def("compose_serial",
        [](const std::vector<SpectralCurve>& curves) { return compose_serial(curves); },
        py::arg("curves"));
  m.def("double_pass", &double_pass, py::arg("forward"), py::arg("reverse"));

  m.def("db_to_linear", &db_to_linear, py::arg("db"));
  m.def("linear_to_db", &linear_to_db, py::arg("ratio"));
  m.def("photon_energy_j", &photon_energy_j, py::arg("lambda_nm"));
  m.def("mean_photons", &mean_photons, py::arg("lambda_nm"), py::arg("power_w"),
        py::arg("duration_s"));

  py::class_<MonitoringDetector>(m, "MonitoringDetector")
      .def(py::init<SpectralCurve, double, double>(), py::arg("responsivity_log10"),
           py::arg("dark_current_a"), py::arg("alarm_factor") = 1.0);
  m.def("photocurrent_a",
        [](const MonitoringDetector& det, double lambda_nm, double power_w, bool clamp) {
          return photocurrent_a(det, lambda_nm, power_w, policy(clamp));
        },
        py::arg("detector"), py::arg("lambda_nm"), py::arg("power_w"), py::arg("clamp") = false);
  m.def("alarm_triggered",
        [](const MonitoringDetector& det, double lambda_nm, double power_w, bool clamp) {
          return alarm_triggered(det, lambda_nm, power_w, policy(clamp));
        },
        py::arg("detector"), py::arg("lambda_nm"), py::arg("power_w"), py::arg("clamp") = false);

  py::class_<Spad>(m, "Spad")
      .def(py::init<SpectralCurve, double, double, double, double, double>(),
           py::arg("efficiency_log10"), py::arg("dark_count_prob") = 1e-4,
           py::arg("gate_fwhm_s") = 2.5e-9, py::arg("gate_rate_hz") = 98e3,
           py::arg("afterpulse_amplitude") = 0.02, py::arg("trap_decay_s") = 10e-6);
  m.def("efficiency_at",
        [](const Spad& spad, double lambda_nm, bool clamp) {
          return efficiency_at(spad, lambda_nm, policy(clamp));
        },
        py::arg("spad"), py::arg("lambda_nm"), py::arg("clamp") = false);
  m.def("detection_probability",
        [](const Spad& spad, double lambda_nm, double mu, bool clamp) {
          return detection_probability(spad, lambda_nm, mu, policy(clamp));
        },
        py::arg("spad"), py::arg("lambda_nm"), py::arg("mu"), py::arg("clamp") = false);
  m.def("invert_efficiency", &invert_efficiency, py::arg("p_tot"), py::arg("dark_count_prob"),
        py::arg("mu"));
  m.def("afterpulse_probability",
        [](const Spad& spad, double lambda_nm, double mu, std::uint64_t gates, bool clamp) {
          return afterpulse_probability(spad, lambda_nm, mu, gates, policy(clamp));
        },
        py::arg("spad"), py::arg("lambda_nm"), py::arg("mu"), py::arg("gates_elapsed"),
        py::arg("clamp") = false);
  m.def("qber_contribution", &qber_contribution, py::arg("signal_click_prob"),
        py::arg("noise_click_prob"));

  py::class_<AttackPulse>(m, "AttackPulse")
      .def(py::init([](double lambda_nm, double peak_power_w, double width_s,
                       double rep_rate_hz) {
             return AttackPulse{lambda_nm, peak_power_w, width_s, rep_rate_hz};
           }),
           py::arg("lambda_nm") = 1550.0, py::arg("peak_power_w") = 0.0,
           py::arg("width_s") = 1e-9, py::arg("rep_rate_hz") = 1e6)
      .def_readwrite("lambda_nm", &AttackPulse::lambda_nm)
      .def_readwrite("peak_power_w", &AttackPulse::peak_power_w)
      .def_readwrite("width_s", &AttackPulse::width_s)
      .def_readwrite("rep_rate_hz", &AttackPulse::rep_rate_hz);

  py::class_<AttackOutcome>(m, "AttackOutcome")
      .def_readonly("mu_eve", &AttackOutcome::mu_eve)
      .def_readonly("required_input_photons", &AttackOutcome::required_input_photons)
      .def_readonly("required_peak_power_w", &AttackOutcome::required_peak_power_w)
      .def_readonly("path_attenuation_db", &AttackOutcome::path_attenuation_db)
      .def_readonly("monitoring_alarm", &AttackOutcome::monitoring_alarm)
      .def_readonly("spad_click_prob", &AttackOutcome::spad_click_prob)
      .def_readonly("afterpulse_elevation", &AttackOutcome::afterpulse_elevation)
      .def_readonly("projected_qber", &AttackOutcome::projected_qber)
      .def_readonly("exceeds_damage", &AttackOutcome::exceeds_damage)
      .def_readonly("discrimination_success", &AttackOutcome::discrimination_success)
      .def_readonly("feasible", &AttackOutcome::feasible);

  py::class_<SystemModel>(m, "SystemModel")
      .def_readonly("name", &SystemModel::name)
      .def_readonly("signal_click_prob", &SystemModel::signal_click_prob)
      .def_readonly("damage_threshold_photons", &SystemModel::damage_threshold_photons)
      .def_readonly("qber_abort", &SystemModel::qber_abort)
      .def_property_readonly("component_ids", [](const SystemModel& sys) {
        std::vector<std::string> ids;
        for (const auto& comp : sys.components) ids.push_back(comp.id);
        return ids;
      });

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](double q0, double y0, double q_abort, double delta_y_max) {
             return ProtocolParams{q0, y0, q_abort, delta_y_max};
           }),
           py::arg("q0") = 0.01, py::arg("y0") = 0.70, py::arg("q_abort") = 0.11,
           py::arg("delta_y_max") = 0.15)
      .def_readwrite("q0", &ProtocolParams::q0)
      .def_readwrite("y0", &ProtocolParams::y0)
      .def_readwrite("q_abort", &ProtocolParams::q_abort)
      .def_readwrite("delta_y_max", &ProtocolParams::delta_y_max);

  py::class_<LoadedSystem>(m, "LoadedSystem")
      .def_readonly("system", &LoadedSystem::system)
      .def_readonly("protocol", &LoadedSystem::protocol)
      .def_readonly("warnings", &LoadedSystem::warnings)
      .def_readonly("config_digest", &LoadedSystem::config_digest);

  m.def("load_system_config",
        [](const std::filesystem::path& path,
           const std::optional<std::filesystem::path>& curves_dir) {
          return load_system_config(path, curves_dir);
        },
        py::arg("path"), py::arg("curves_dir") = std::nullopt);
  m.def("path_attenuation_db",
        [](const SystemModel& sys, double lambda_nm, bool clamp) {
          return path_attenuation_db(sys, lambda_nm, policy(clamp));
        },
        py::arg("system"), py::arg("lambda_nm"), py::arg("clamp") = false);
  m.def("photons_for_target_mu",
        [](const SystemModel& sys, double lambda_nm, double target_mu, bool clamp) {
          return photons_for_target_mu(sys, lambda_nm, target_mu, policy(clamp));
        },
        py::arg("system"), py::arg("lambda_nm"), py::arg("target_mu"), py::arg("clamp") = false);
  m.def("helstrom_success", &helstrom_success, py::arg("mu"), py::arg("phase_separation_rad"));
  m.def("evaluate_attack",
        [](const SystemModel& sys, const AttackPulse& pulse, double target_mu, bool clamp) {
          return evaluate_attack(sys, pulse, target_mu, policy(clamp));
        },
        py::arg("system"), py::arg("pulse"), py::arg("target_mu"), py::arg("clamp") = false);
  m.def("scan_wavelengths",
        [](const SystemModel& sys, const std::vector<double>& grid, const AttackPulse& tmpl,
           double target_mu, bool clamp) {
          std::vector<std::pair<double, AttackOutcome>> out;
          for (const auto& entry : scan_wavelengths(sys, grid, tmpl, target_mu, policy(clamp))) {
            out.emplace_back(entry.lambda_nm, entry.outcome);
          }
          return out;
        },
        py::arg("system"), py::arg("lambda_grid"), py::arg("pulse_template"),
        py::arg("target_mu"), py::arg("clamp") = false);

  py::class_<AttackObservation>(m, "AttackObservation")
      .def(py::init([](double q1, double y1, double eve_knowledge, double pa_subtraction) {
             return AttackObservation{q1, y1, eve_knowledge, pa_subtraction};
           }),
           py::arg("q1"), py::arg("y1"), py::arg("eve_knowledge_fraction"),
           py::arg("pa_subtraction_fraction"))
      .def_readwrite("q1", &AttackObservation::q1)
      .def_readwrite("y1", &AttackObservation::y1)
      .def_readwrite("eve_knowledge_fraction", &AttackObservation::eve_knowledge_fraction)
      .def_readwrite("pa_subtraction_fraction", &AttackObservation::pa_subtraction_fraction);

  py::class_<BreachMargins>(m, "BreachMargins")
      .def_readonly("qber_margin", &BreachMargins::qber_margin)
      .def_readonly("delta_y_margin", &BreachMargins::delta_y_margin)
      .def_readonly("pa_margin", &BreachMargins::pa_margin);

  py::class_<BreachVerdict>(m, "BreachVerdict")
      .def_readonly("undetected", &BreachVerdict::undetected)
      .def_readonly("pa_defeated", &BreachVerdict::pa_defeated)
      .def_readonly("breach", &BreachVerdict::breach)
      .def_readonly("delta_y", &BreachVerdict::delta_y)
      .def_readonly("margins", &BreachVerdict::margins);

  m.def("delta_y", &delta_y, py::arg("y0"), py::arg("y1"));
  m.def("breach_verdict", &breach_verdict, py::arg("params"), py::arg("observation"));
  m.def("asymptotic_bb84_pa_fraction", &asymptotic_bb84_pa_fraction, py::arg("q1"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
