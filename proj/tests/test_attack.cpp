#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "thra/attack.hpp"
#include "thra/config.hpp"
#include "thra/errors.hpp"
#include "thra/units.hpp"

#include "helstrom_oracle.hpp"
#include "test_helpers.hpp"

using namespace thra;
using test::flat_curve;
using test::system_path;

namespace {

// Chain with one flat loss and an open connector reflecting at -14 dB:
// the -60 dB worked example (two passes of -23 dB plus the reflection).
SystemModel toy_system(double one_way_loss_db = -23.0, double reflectivity_db = -14.0) {
  SystemModel sys;
  sys.name = "toy";
  sys.components.push_back(
      Component{"il", GenericLoss{flat_curve(one_way_loss_db, 1000, 1800, "il", true)},
                std::nullopt});
  sys.components.push_back(
      Component{"open_port", Connector{DbValue(reflectivity_db), -0.3}, std::nullopt});
  sys.path = {{"il", PortDir::forward}, {"open_port", PortDir::forward}};
  sys.reflection_site = 1;
  return sys;
}

void add_isolator(SystemModel& sys, double isolation_db, double forward_db = 0.0) {
  sys.components.push_back(
      Component{"iso",
                Isolator{flat_curve(forward_db, 1000, 1800, "iso.fwd", true),
                         flat_curve(isolation_db, 1000, 1800, "iso.rev", true)},
                std::nullopt});
  // probe enters against the isolator's forward direction
  sys.path.insert(sys.path.begin() + 1, PathEntry{"iso", PortDir::reverse});
  sys.reflection_site += 1;
}

AttackPulse pulse_reaching(const SystemModel& sys, double lambda_nm, double mu,
                           double width_s = 1e-9) {
  AttackPulse pulse;
  pulse.lambda_nm = lambda_nm;
  pulse.width_s = width_s;
  pulse.rep_rate_hz = 1e5;
  pulse.peak_power_w =
      photons_for_target_mu(sys, lambda_nm, mu) * photon_energy_j(lambda_nm) / width_s;
  return pulse;
}

} // namespace

TEST_CASE("photon budget of the -60 dB example") {
  const auto sys = toy_system();
  validate_system(sys);
  CHECK(path_attenuation_db(sys, 1550.0) == doctest::Approx(-60.0).epsilon(1e-12));
  CHECK(photons_for_target_mu(sys, 1550.0, 4.0) == doctest::Approx(4e6).epsilon(1e-9));

  SUBCASE("a 50 dB isolator raises the budget five orders of magnitude") {
    auto guarded = toy_system();
    add_isolator(guarded, -50.0);
    validate_system(guarded);
    CHECK(path_attenuation_db(guarded, 1550.0) == doctest::Approx(-110.0).epsilon(1e-12));
    CHECK(photons_for_target_mu(guarded, 1550.0, 4.0) >= 4e11 * (1.0 - 1e-9));
  }
}

TEST_CASE("photon budget is linear in the target") {
  const auto sys = toy_system();
  const double base = photons_for_target_mu(sys, 1310.0, 1.0);
  CHECK(photons_for_target_mu(sys, 1310.0, 7.5) == doctest::Approx(7.5 * base).epsilon(1e-12));
}

TEST_CASE("a generic loss shifts the round trip by twice its value") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> loss(-20.0, 0.0);
  for (int i = 0; i < 200; ++i) {
    auto sys = toy_system(loss(rng));
    const double x = loss(rng);
    const double before = path_attenuation_db(sys, 1400.0);

    SystemModel with_loss = sys;
    with_loss.components.push_back(
        Component{"extra", GenericLoss{flat_curve(x, 1000, 1800, "extra", true)}, std::nullopt});

    // inserted ahead of the reflection site: counted on both passes
    with_loss.path.insert(with_loss.path.begin(), PathEntry{"extra", PortDir::forward});
    with_loss.reflection_site += 1;
    REQUIRE(path_attenuation_db(with_loss, 1400.0) ==
            doctest::Approx(before + 2.0 * x).epsilon(1e-9));

    // appended after the site: the probe never reaches it
    SystemModel behind = sys;
    behind.components.push_back(
        Component{"extra", GenericLoss{flat_curve(x, 1000, 1800, "extra", true)}, std::nullopt});
    behind.path.push_back(PathEntry{"extra", PortDir::forward});
    REQUIRE(path_attenuation_db(behind, 1400.0) == doctest::Approx(before).epsilon(1e-9));
  }
}

TEST_CASE("bob fixture round trip and budget") {
  const auto loaded = load_system_config(system_path("bob.json"));
  const double att = path_attenuation_db(loaded.system, 1550.0);
  CHECK(std::abs(att - (-57.0)) <= 1.0);
  const double photons = photons_for_target_mu(loaded.system, 1550.0, 3.0);
  CHECK(std::abs(photons - 1.5e6) <= 0.1 * 1.5e6);
}

TEST_CASE("opening the modulator port raises the back-reflection by 8 dB") {
  const auto open = load_system_config(system_path("bob.json"));
  const auto closed = load_system_config(system_path("bob_port6_closed.json"));
  const double rise = path_attenuation_db(open.system, 1550.0) -
                      path_attenuation_db(closed.system, 1550.0);
  CHECK(rise == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("helstrom bound closed form") {
  CHECK(helstrom_success(0.0, 1.3) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(helstrom_success(4.0, M_PI_2) == doctest::Approx(0.999916127308396).epsilon(1e-9));
  for (double theta : {M_PI_2, 2.0, M_PI}) {
    CHECK(helstrom_success(3.0, theta) >= 0.90);
  }
  CHECK_THROWS_AS(helstrom_success(-1.0, 1.0), DomainError);
}

TEST_CASE("helstrom closed form matches the truncated-Fock oracle") {
  for (double mu : {0.0, 0.5, 1.0, 3.0, 4.0, 10.0}) {
    for (double theta : {M_PI / 4.0, M_PI_2, M_PI}) {
      const double closed = helstrom_success(mu, theta);
      const double brute = test::helstrom_oracle(mu, theta);
      REQUIRE(std::abs(closed - brute) < 1e-9);
    }
  }
}

TEST_CASE("helstrom bound is monotone and bounded") {
  std::mt19937 rng(32);
  std::uniform_real_distribution<double> mu_dist(0.0, 10.0);
  std::uniform_real_distribution<double> theta_dist(0.0, M_PI);
  for (int i = 0; i < 1000; ++i) {
    const double mu = mu_dist(rng);
    const double theta = theta_dist(rng);
    const double p = helstrom_success(mu, theta);
    REQUIRE(p >= 0.5);
    REQUIRE(p <= 1.0);
    REQUIRE(helstrom_success(mu + 0.5, theta) >= p);
    // larger phase separation (up to pi) can only help
    if (theta < M_PI - 0.1) {
      REQUIRE(helstrom_success(mu, theta + 0.1) >= p - 1e-15);
    }
  }
}

TEST_CASE("monitoring alarm fires at the boundary power, not below") {
  // entrance tap coupler diverting 10% to a detector that is nearly blind
  // at the probe wavelength (responsivity 1e-4 A/W)
  SystemModel sys = toy_system();
  sys.components.push_back(Component{"tap", Coupler{-10.0, -0.458, 0.0}, std::nullopt});
  sys.path.insert(sys.path.begin(), PathEntry{"tap", PortDir::forward});
  sys.reflection_site += 1;
  sys.monitoring = MonitoringTap{MonitoringDetector{flat_curve(-4.0), 10e-9, 1.0}, 0};
  validate_system(sys);

  // alarm when rho * P_tap >= I_D: P_tap = peak * 10^(-1), so peak* = 1e-3 W
  const double boundary_peak = 1e-3;
  AttackPulse pulse{1550.0, boundary_peak, 1e-9, 1e5};
  CHECK(evaluate_attack(sys, pulse, 4.0).monitoring_alarm);

  pulse.peak_power_w = boundary_peak * (1.0 - 1e-6);
  CHECK(!evaluate_attack(sys, pulse, 4.0).monitoring_alarm);
  for (double frac : {0.9, 0.5, 0.1, 1e-3}) {
    pulse.peak_power_w = boundary_peak * frac;
    CHECK(!evaluate_attack(sys, pulse, 4.0).monitoring_alarm);
  }
}

TEST_CASE("attack outcomes fill the photon budget fields") {
  const auto sys = toy_system();
  const auto pulse = pulse_reaching(sys, 1550.0, 4.0);
  const auto out = evaluate_attack(sys, pulse, 4.0);
  CHECK(out.path_attenuation_db == doctest::Approx(-60.0).epsilon(1e-12));
  CHECK(out.mu_eve == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(out.required_input_photons == doctest::Approx(4e6).epsilon(1e-9));
  CHECK(out.required_peak_power_w == doctest::Approx(pulse.peak_power_w).epsilon(1e-9));
  CHECK(out.discrimination_success == doctest::Approx(helstrom_success(4.0, M_PI_2)).epsilon(1e-12));
  CHECK(!out.monitoring_alarm);
  CHECK(!out.exceeds_damage);
  CHECK(out.feasible);
}

TEST_CASE("damage threshold marks the attack infeasible") {
  auto sys = toy_system();
  sys.damage_threshold_photons = 1e6; // below the 4e6 requirement
  const auto out = evaluate_attack(sys, pulse_reaching(sys, 1550.0, 4.0), 4.0);
  CHECK(out.exceeds_damage);
  CHECK(!out.feasible);
}

TEST_CASE("a pulse short of the target is infeasible") {
  const auto sys = toy_system();
  auto pulse = pulse_reaching(sys, 1550.0, 4.0);
  pulse.peak_power_w *= 0.5;
  const auto out = evaluate_attack(sys, pulse, 4.0);
  CHECK(out.mu_eve == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(!out.feasible);
}

TEST_CASE("a perfect isolator defeats any survivable pulse") {
  auto sys = toy_system();
  add_isolator(sys, kTotalExtinctionDb);
  validate_system(sys);
  // brightest pulse that stays below the damage threshold
  AttackPulse pulse{1550.0, 0.0, 1e-9, 1e5};
  pulse.peak_power_w =
      sys.damage_threshold_photons * photon_energy_j(1550.0) / pulse.width_s * (1.0 - 1e-9);
  const auto out = evaluate_attack(sys, pulse, 1e-3);
  CHECK(out.mu_eve < 1e-3);
  // reaching the target would take photon counts far past the damage limit
  CHECK(out.required_input_photons > sys.damage_threshold_photons);
  CHECK(out.exceeds_damage);
  CHECK(!out.feasible);
}

TEST_CASE("bob fixture: 1550 nm is burned by afterpulsing, 1700 nm is not") {
  const auto loaded = load_system_config(system_path("bob.json"));
  const auto& sys = loaded.system;

  const auto at_1550 = evaluate_attack(sys, pulse_reaching(sys, 1550.0, 3.0), 3.0);
  CHECK(at_1550.mu_eve == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(at_1550.projected_qber >= sys.qber_abort);
  CHECK(!at_1550.feasible);
  CHECK(at_1550.spad_click_prob > 0.99); // the probe pulse floods the gate

  const auto at_1700 = evaluate_attack(sys, pulse_reaching(sys, 1700.0, 3.0), 3.0);
  CHECK(at_1700.projected_qber < sys.qber_abort);
  CHECK(at_1700.feasible);
  CHECK(at_1700.afterpulse_elevation < at_1550.afterpulse_elevation);
}

TEST_CASE("scan ranks the isolator-only transmitter near 1300 nm") {
  const auto loaded = load_system_config(system_path("alice_iso1.json"));
  std::vector<double> grid;
  for (double l = 1100.0; l <= 1750.0; l += 5.0) grid.push_back(l);

  AttackPulse tmpl{1550.0, 1.0, 1e-9, 1e5};
  const auto entries = scan_wavelengths(loaded.system, grid, tmpl, 4.0);
  REQUIRE(entries.size() == grid.size());
  CHECK(entries.front().outcome.feasible);
  CHECK(entries.front().lambda_nm >= 1250.0);
  CHECK(entries.front().lambda_nm <= 1350.0);

  SUBCASE("every scan entry reaches the target photon number") {
    for (const auto& e : entries) {
      REQUIRE(e.outcome.mu_eve == doctest::Approx(4.0).epsilon(1e-9));
    }
  }

  SUBCASE("feasibility implies no alarm and no damage") {
    for (const auto& e : entries) {
      if (e.outcome.feasible) {
        REQUIRE(!e.outcome.monitoring_alarm);
        REQUIRE(!e.outcome.exceeds_damage);
      }
    }
  }

  SUBCASE("feasible entries are sorted by required photons") {
    for (std::size_t i = 1; i < entries.size(); ++i) {
      if (!entries[i].outcome.feasible) break;
      REQUIRE(entries[i].outcome.required_input_photons >=
              entries[i - 1].outcome.required_input_photons * (1.0 - 0.024)); // 0.1 dB slack
    }
  }

  SUBCASE("deterministic") {
    const auto again = scan_wavelengths(loaded.system, grid, tmpl, 4.0);
    REQUIRE(again.size() == entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      REQUIRE(again[i].lambda_nm == entries[i].lambda_nm);
      REQUIRE(again[i].outcome.required_input_photons ==
              entries[i].outcome.required_input_photons);
    }
  }

  SUBCASE("ranking ignores a non-binding damage threshold") {
    auto scaled = loaded.system;
    scaled.damage_threshold_photons *= 100.0;
    const auto rescanned = scan_wavelengths(scaled, grid, tmpl, 4.0);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      REQUIRE(rescanned[i].lambda_nm == entries[i].lambda_nm);
    }
  }
}

TEST_CASE("a narrow filter removes the 1310 nm advantage") {
  const auto base = load_system_config(system_path("alice_iso1.json"));
  const auto filtered = load_system_config(system_path("alice_iso1_filtered.json"));

  const double before = photons_for_target_mu(base.system, 1310.0, 4.0);
  const double after = photons_for_target_mu(filtered.system, 1310.0, 4.0);
  CHECK(linear_to_db(after / before) == doctest::Approx(120.0).epsilon(1e-9));

  // in the passband the filter costs only its insertion loss twice
  const double at_1550 = photons_for_target_mu(filtered.system, 1550.0, 4.0) /
                         photons_for_target_mu(base.system, 1550.0, 4.0);
  CHECK(linear_to_db(at_1550) == doctest::Approx(2.0).epsilon(1e-9));

  std::vector<double> grid;
  for (double l = 1100.0; l <= 1750.0; l += 5.0) grid.push_back(l);
  AttackPulse tmpl{1550.0, 1.0, 1e-9, 1e5};
  const auto entries = scan_wavelengths(filtered.system, grid, tmpl, 4.0);
  // only the passband survives; everything else needs pulses beyond the
  // damage threshold
  CHECK(entries.front().outcome.feasible);
  CHECK(entries.front().lambda_nm == 1550.0);
  std::size_t feasible = 0;
  for (const auto& e : entries) feasible += e.outcome.feasible ? 1 : 0;
  CHECK(feasible == 1);
}

TEST_CASE("the monitored transmitter pushes the attack beyond the detector band") {
  const auto loaded = load_system_config(system_path("alice_iso1_monitored.json"));
  const auto& sys = loaded.system;

  const auto at_1310 = evaluate_attack(sys, pulse_reaching(sys, 1310.0, 4.0), 4.0);
  CHECK(at_1310.monitoring_alarm);
  CHECK(!at_1310.feasible);

  const auto at_1700 = evaluate_attack(sys, pulse_reaching(sys, 1700.0, 4.0), 4.0);
  CHECK(!at_1700.monitoring_alarm);
  CHECK(at_1700.feasible);
}

TEST_CASE("scan edge cases") {
  const auto loaded = load_system_config(system_path("alice_iso1.json"));
  AttackPulse tmpl{1550.0, 1.0, 1e-9, 1e5};

  CHECK_THROWS_AS(scan_wavelengths(loaded.system, {}, tmpl, 4.0), EmptyGridError);

  const std::array single{1550.0};
  const auto entries = scan_wavelengths(loaded.system, single, tmpl, 4.0);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].lambda_nm == 1550.0);

  // out-of-grid wavelength propagates OutOfRange unless clamped
  const std::array outside{900.0};
  CHECK_THROWS_AS(scan_wavelengths(loaded.system, outside, tmpl, 4.0), OutOfRangeError);
  CHECK_NOTHROW(scan_wavelengths(loaded.system, outside, tmpl, 4.0, RangePolicy::clamp));
}

TEST_CASE("pulse validation") {
  CHECK_THROWS_AS(validate_pulse(AttackPulse{1550.0, 0.0, 1e-9, 1e5}), DomainError);
  CHECK_THROWS_AS(validate_pulse(AttackPulse{1550.0, 1.0, 1e-3, 1e5}), DomainError); // duty > 1
  CHECK_NOTHROW(validate_pulse(AttackPulse{1550.0, 1.0, 1e-9, 1e5}));
}

TEST_CASE("system structural validation") {
  SystemModel sys = toy_system();
  sys.reflection_site = 5;
  CHECK_THROWS_AS(validate_system(sys), ConfigError);

  sys = toy_system();
  sys.path[0].component_id = "ghost";
  CHECK_THROWS_AS(validate_system(sys), ConfigError);

  // reflection site without any reflection
  sys = toy_system();
  sys.reflection_site = 0;
  CHECK_THROWS_AS(validate_system(sys), ConfigError);

  // direction kind mismatch is caught at validation, not first query
  sys = toy_system();
  sys.path[0].direction = CirculatorHop{1, 2};
  CHECK_THROWS_AS(validate_system(sys), InvalidDirectionError);
}
