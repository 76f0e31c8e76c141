#include <doctest.h>

#include <cmath>
#include <random>

#include "thra/config.hpp"
#include "thra/detectors.hpp"
#include "thra/errors.hpp"
#include "thra/units.hpp"

#include "test_helpers.hpp"

using namespace thra;
using test::curve_path;
using test::flat_curve;

namespace {

MonitoringDetector make_monitor(double responsivity_log10, double dark_a = 1e-8,
                                double factor = 1.0) {
  return MonitoringDetector{flat_curve(responsivity_log10), dark_a, factor};
}

Spad fixture_spad(double amplitude = 0.01) {
  return Spad{load_curve_csv(curve_path("spad_efficiency_log10.csv"), "spad.eff"),
              1e-4, 2.5e-9, 98e3, amplitude, 1e-5};
}

} // namespace

TEST_CASE("photocurrent is responsivity times power") {
  const auto det = make_monitor(-4.0); // 1e-4 A/W
  CHECK(photocurrent_a(det, 1550.0, 100e-6) == doctest::Approx(10e-9).epsilon(1e-12));
  CHECK(photocurrent_a(det, 1550.0, 0.0) == 0.0);

  const auto strong = make_monitor(std::log10(0.8));
  CHECK(photocurrent_a(strong, 1550.0, 1e-6) == doctest::Approx(0.8e-6).epsilon(1e-12));
}

TEST_CASE("alarm threshold uses the at-or-above convention") {
  const auto det = make_monitor(-4.0, 10e-9, 1.0);
  // 100 uW lands the photocurrent exactly on the dark-current floor
  CHECK(alarm_triggered(det, 1550.0, 100e-6));
  CHECK(!alarm_triggered(det, 1550.0, 100e-6 * (1.0 - 1e-9)));
  CHECK(!alarm_triggered(det, 1550.0, 50e-6));
  CHECK(alarm_triggered(det, 1550.0, 1e-3));
  CHECK(!alarm_triggered(det, 1550.0, 0.0));
}

TEST_CASE("alarm is monotone in power") {
  const auto det = make_monitor(-2.5, 5e-9, 2.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> power(0.0, 1e-3);
  for (int i = 0; i < 500; ++i) {
    double a = power(rng);
    double b = power(rng);
    if (a > b) std::swap(a, b);
    if (alarm_triggered(det, 1400.0, a)) {
      REQUIRE(alarm_triggered(det, 1400.0, b));
    }
  }
}

TEST_CASE("mean photon number") {
  CHECK(mean_photons(1550.0, 0.0, 1e-9) == 0.0);

  // 100 uW for 1 ns at 1550 nm: 1e-13 J at ~1.282e-19 J per photon
  const double mu = mean_photons(1550.0, 100e-6, 1e-9);
  CHECK(mu == doctest::Approx(7.80e5).epsilon(1e-3));
  CHECK(mu == doctest::Approx(1e-13 / photon_energy_j(1550.0)).epsilon(1e-12));

  CHECK(mean_photons(3100.0, 100e-6, 1e-9) == doctest::Approx(2.0 * mu).epsilon(1e-12));
  CHECK_THROWS_AS(mean_photons(1550.0, -1.0, 1e-9), DomainError);
}

TEST_CASE("detection probability") {
  const Spad spad{flat_curve(-1.0), 1e-4, 2.5e-9, 98e3, 0.02, 1e-5}; // eta = 0.1

  CHECK(detection_probability(spad, 1550.0, 0.0) == doctest::Approx(1e-4).epsilon(1e-12));

  const double p = detection_probability(spad, 1550.0, 1.0);
  // frozen: 1e-4 + (1 - e^-0.1) * 0.9999
  CHECK(p == doctest::Approx(0.09525306570584402).epsilon(1e-12));
  // independent series route for 1 - e^-x, x = 0.1
  const double x = 0.1;
  double series = 0.0;
  double term = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -x / k;
    series -= term;
  }
  CHECK((p - 1e-4) / (1.0 - 1e-4) == doctest::Approx(series).epsilon(1e-9));

  // saturation limit
  CHECK(detection_probability(spad, 1550.0, 1e4) > 1.0 - 1e-12);
  CHECK(detection_probability(spad, 1550.0, 1e4) <= 1.0);
}

TEST_CASE("detection probability is monotone in mu and in efficiency") {
  const Spad spad{flat_curve(-1.3), 5e-4, 2.5e-9, 98e3, 0.02, 1e-5};
  double prev = -1.0;
  for (double mu : {0.0, 0.01, 0.1, 1.0, 5.0, 50.0}) {
    const double p = detection_probability(spad, 1200.0, mu);
    REQUIRE(p > prev);
    prev = p;
  }

  prev = -1.0;
  for (double log_eta : {-5.0, -3.0, -2.0, -1.0, -0.5}) {
    const Spad s{flat_curve(log_eta), 5e-4, 2.5e-9, 98e3, 0.02, 1e-5};
    const double p = detection_probability(s, 1200.0, 2.0);
    REQUIRE(p > prev);
    prev = p;
  }
}

TEST_CASE("efficiency inversion round-trips the detection equation") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> log_eta(std::log(1e-5), std::log(0.25));
  std::uniform_real_distribution<double> log_mu(std::log(0.1), std::log(100.0));
  std::uniform_real_distribution<double> log_d(std::log(1e-6), std::log(1e-3));

  int cases = 0;
  while (cases < 1000) {
    const double eta = std::exp(log_eta(rng));
    const double mu = std::exp(log_mu(rng));
    const double d = std::exp(log_d(rng));
    // Once mu*eta saturates the click probability, the double carries no
    // efficiency information left to invert; those draws are resampled.
    if (mu * eta > 8.0) continue;
    ++cases;

    const double p = d + (-std::expm1(-mu * eta)) * (1.0 - d);
    const double recovered = invert_efficiency(p, d, mu);
    REQUIRE(std::abs(recovered - eta) / eta < 1e-12);
  }
}

TEST_CASE("inversion rejects saturated or buried signals") {
  CHECK_THROWS_AS(invert_efficiency(1e-4, 1e-4, 1.0), NotInvertibleError);
  CHECK_THROWS_AS(invert_efficiency(5e-5, 1e-4, 1.0), NotInvertibleError);
  CHECK_THROWS_AS(invert_efficiency(1.0, 1e-4, 1.0), NotInvertibleError);
  CHECK_THROWS_AS(invert_efficiency(0.5, 1e-4, 0.0), DomainError);
}

TEST_CASE("fixture spad efficiency anchors") {
  const auto spad = fixture_spad();
  const double eta_1720 = efficiency_at(spad, 1720.0);
  CHECK(eta_1720 >= 4e-5);  // 5e-5 +- 20%
  CHECK(eta_1720 <= 6e-5);
  const double eta_1550 = efficiency_at(spad, 1550.0);
  CHECK(eta_1550 / eta_1720 >= 1e3);
  // peak sits near 1310 nm
  CHECK(efficiency_at(spad, 1310.0) > eta_1550);
}

TEST_CASE("afterpulse model") {
  const auto spad = fixture_spad();

  CHECK(afterpulse_probability(spad, 1550.0, 0.0, 1) == 0.0);

  SUBCASE("monotone decreasing in elapsed gates") {
    double prev = 2.0;
    for (std::uint64_t gates : {0, 1, 2, 5, 20, 100}) {
      const double p = afterpulse_probability(spad, 1550.0, 10.0, gates);
      REQUIRE(p <= prev);
      prev = p;
    }
  }

  SUBCASE("monotone increasing in mu") {
    double prev = -1.0;
    for (double mu : {0.0, 0.1, 1.0, 10.0, 100.0}) {
      const double p = afterpulse_probability(spad, 1550.0, mu, 1);
      REQUIRE(p >= prev);
      prev = p;
    }
  }

  SUBCASE("clamped at certainty") {
    CHECK(afterpulse_probability(spad, 1550.0, 1e9, 0) == 1.0);
  }

  SUBCASE("lower efficiency implies lower afterpulsing, all else fixed") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> wl(1000.0, 1800.0);
    for (int i = 0; i < 300; ++i) {
      const double la = wl(rng);
      const double lb = wl(rng);
      const double pa = afterpulse_probability(spad, la, 50.0, 1);
      const double pb = afterpulse_probability(spad, lb, 50.0, 1);
      if (efficiency_at(spad, la) <= efficiency_at(spad, lb)) {
        REQUIRE(pa <= pb);
      } else {
        REQUIRE(pa >= pb);
      }
    }
  }

  SUBCASE("three-orders drop from 1550 to 1700 nm at fixed mu") {
    const double p_1550 = afterpulse_probability(spad, 1550.0, 100.0, 0);
    const double p_1700 = afterpulse_probability(spad, 1700.0, 100.0, 0);
    REQUIRE(p_1550 < 1.0); // not clamped, otherwise the ratio is meaningless
    CHECK(p_1700 <= 1e-3 * p_1550);
  }
}

TEST_CASE("qber contribution of noise clicks") {
  CHECK(qber_contribution(0.01, 0.0) == 0.0);
  CHECK(qber_contribution(0.0, 0.3) == 0.5);
  CHECK(qber_contribution(0.01, 0.002) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK_THROWS_AS(qber_contribution(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(qber_contribution(1.0, 0.1), DomainError);
}

TEST_CASE("detector parameter validation") {
  CHECK_THROWS_AS(validate_detector(MonitoringDetector{flat_curve(-4.0), 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(validate_detector(MonitoringDetector{flat_curve(-4.0), 1e-8, 0.5}), DomainError);
  CHECK_NOTHROW(validate_detector(make_monitor(-4.0)));

  Spad bad = fixture_spad();
  bad.dark_count_prob = 0.0;
  CHECK_THROWS_AS(validate_detector(bad), DomainError);
  bad = fixture_spad();
  bad.trap_decay_s = 0.0;
  CHECK_THROWS_AS(validate_detector(bad), DomainError);
  // efficiency above 1 is unphysical
  const Spad gainy{flat_curve(0.5), 1e-4, 2.5e-9, 98e3, 0.02, 1e-5};
  CHECK_THROWS_AS(validate_detector(gainy), DomainError);
  CHECK_NOTHROW(validate_detector(fixture_spad()));
}
