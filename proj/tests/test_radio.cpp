#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ptxsim/radio.hpp"

using namespace ptxsim;

TEST_CASE("radio: default constants and derived crossover distance") {
    const RadioParams rp = default_radio();
    CHECK(rp.e_elec == 50e-9);
    CHECK(rp.eps_fs == 10e-12);
    CHECK(rp.eps_mp == 0.0013e-12);
    CHECK(rp.msg_bits == 1000.0);
    CHECK(rp.d0 == doctest::Approx(87.70580193070292).epsilon(1e-12));
    CHECK(rp.d0 == std::sqrt(rp.eps_fs / rp.eps_mp));
}

TEST_CASE("radio: d0 override survives resolution") {
    RadioParams rp;
    rp.d0 = 75.0;
    CHECK(resolve_radio(rp).d0 == 75.0);
}

TEST_CASE("radio: tx energy, free-space branch") {
    const RadioParams rp = default_radio();
    CHECK(tx_energy(0.0, 50.0, rp) == 0.0);
    CHECK(tx_energy(1000.0, 50.0, rp) == doctest::Approx(7.5e-5).epsilon(1e-12));
    // both terms scale linearly in k
    CHECK(tx_energy(2000.0, 50.0, rp) == doctest::Approx(2.0 * 7.5e-5).epsilon(1e-12));
}

TEST_CASE("radio: tx energy, multipath branch") {
    const RadioParams rp = default_radio();
    CHECK(tx_energy(1000.0, 100.0, rp) == doctest::Approx(1.8e-4).epsilon(1e-12));
}

TEST_CASE("radio: branch continuity at d0") {
    const RadioParams rp = default_radio();
    const double k = 1000.0;
    const double fs_at_d0 = k * rp.e_elec + k * rp.eps_fs * rp.d0 * rp.d0;
    const double mp_at_d0 = k * rp.e_elec + k * rp.eps_mp * rp.d0 * rp.d0 * rp.d0 * rp.d0;
    CHECK(fs_at_d0 == doctest::Approx(mp_at_d0).epsilon(1e-12));
    CHECK(tx_energy(k, rp.d0, rp) == doctest::Approx(fs_at_d0).epsilon(1e-12));
    CHECK(tx_energy(k, std::nextafter(rp.d0, 0.0), rp) ==
          doctest::Approx(tx_energy(k, rp.d0, rp)).epsilon(1e-9));
}

TEST_CASE("radio: rx energy") {
    const RadioParams rp = default_radio();
    CHECK(rx_energy(0.0, rp) == 0.0);
    CHECK(rx_energy(1000.0, rp) == doctest::Approx(5e-5).epsilon(1e-12));
}

TEST_CASE("radio: rx is always cheaper than tx over a positive distance") {
    const RadioParams rp = default_radio();
    for (double d : {0.1, 1.0, 30.0, 87.0, 88.0, 200.0}) {
        CHECK(rx_energy(1000.0, rp) < tx_energy(1000.0, d, rp));
    }
}

TEST_CASE("radio: tx energy is monotone in distance") {
    const RadioParams rp = default_radio();
    double prev = tx_energy(1000.0, 0.0, rp);
    for (double d = 5.0; d <= 300.0; d += 5.0) {
        const double e = tx_energy(1000.0, d, rp);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("radio: domain errors") {
    const RadioParams rp = default_radio();
    CHECK_THROWS_AS(tx_energy(-1.0, 10.0, rp), std::domain_error);
    CHECK_THROWS_AS(tx_energy(10.0, -1.0, rp), std::domain_error);
    CHECK_THROWS_AS(rx_energy(-1.0, rp), std::domain_error);
}

TEST_CASE("radio: parameter validation names the offending key") {
    RadioParams rp = default_radio();
    rp.e_elec = 0.0;
    CHECK_THROWS_WITH_AS(rp.validate(), "radio.e_elec: must be > 0", std::invalid_argument);
    rp = default_radio();
    rp.msg_bits = -5.0;
    CHECK_THROWS_WITH_AS(rp.validate(), "radio.msg_bits: must be > 0", std::invalid_argument);
    rp = RadioParams{};
    rp.eps_mp = 0.0;
    CHECK_THROWS_AS(resolve_radio(rp), std::invalid_argument);
}
