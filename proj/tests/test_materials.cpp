#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taox/materials.hpp"

#include <cmath>

using namespace taox;

namespace {
const MaterialDB db;  // defaults throughout unless a case says otherwise
}

TEST_CASE("conduction prefactor is linear in filling and clamps at saturation") {
    CHECK(sigma_prefactor(0.0, db) == doctest::Approx(1e3));
    CHECK(sigma_prefactor(1e28, db) == doctest::Approx(9.5e4));
    // clamp: densities beyond saturation do not raise the prefactor further
    CHECK(sigma_prefactor(2e28, db) == doctest::Approx(sigma_prefactor(1e28, db)));

    MaterialDB steep = db;
    steep.sigma_slope = 18.8;
    CHECK(sigma_prefactor(5e27, steep) == doctest::Approx(1e3 + 1.88e5 * 0.5));

    CHECK_THROWS_AS(sigma_prefactor(-1.0, db), std::invalid_argument);
}

TEST_CASE("activation barrier interpolates between insulating and metallic limits") {
    CHECK(activation_energy(0.0, db) == doctest::Approx(0.05));
    CHECK(activation_energy(5e27, db) == doctest::Approx(-0.006));
    CHECK(activation_energy(1e28, db) == doctest::Approx(-0.006));
    CHECK(activation_energy(2.5e27, db) == doctest::Approx(0.022));
    // monotone non-increasing in density
    double prev = activation_energy(0.0, db);
    for (double n = 5e26; n <= 1e28; n += 5e26) {
        double e = activation_energy(n, db);
        CHECK(e <= prev + 1e-15);
        prev = e;
    }
}

TEST_CASE("field-assisted conduction term") {
    CHECK(pf_term(4e8, 300.0, db) == doctest::Approx(13.97).epsilon(0.005));
    // root of the linear part: below it the term is clamped to zero
    double root = std::pow(-db.pf_offset / db.pf_field_coefficient, 2.0);
    CHECK(root == doctest::Approx(1.082e8).epsilon(0.001));
    CHECK(pf_term(root * 0.999, 300.0, db) == 0.0);
    CHECK(pf_term(root * 0.5, 900.0, db) == 0.0);
    CHECK(pf_term(root * 1.001, 300.0, db) > 0.0);
    CHECK(pf_term(0.0, 300.0, db) == 0.0);
    CHECK_THROWS_AS(pf_term(-1.0, 300.0, db), std::invalid_argument);
}

TEST_CASE("oxide conductivity composes prefactor, barrier and field term") {
    CHECK(sigma_oxide(1e28, 300.0, 0.0, db) == doctest::Approx(1.20e5).epsilon(0.01));
    CHECK(sigma_oxide(0.0, 300.0, 0.0, db) == doctest::Approx(144.6).epsilon(0.01));
    // additivity of the field term
    double base = sigma_oxide(1e22, 350.0, 0.0, db);
    double with_field = sigma_oxide(1e22, 350.0, 4e8, db);
    CHECK(with_field - base == doctest::Approx(pf_term(4e8, 350.0, db)));
    // increasing in density at fixed temperature and field
    double prev = sigma_oxide(0.0, 300.0, 0.0, db);
    for (double n = 1e27; n <= 1e28; n += 1e27) {
        double s = sigma_oxide(n, 300.0, 0.0, db);
        CHECK(s > prev);
        prev = s;
    }
    CHECK_THROWS_AS(sigma_oxide(1e28, 0.0, 0.0, db), std::invalid_argument);
}

TEST_CASE("thermal conductivity law") {
    CHECK(thermal_conductivity(0.0, 293.0, db) == doctest::Approx(0.12));
    CHECK(thermal_conductivity(1e28, 293.0, db) == doctest::Approx(57.62));
    CHECK(thermal_conductivity(0.0, 393.0, db) == doctest::Approx(1.32));
    // clamp at saturation density
    CHECK(thermal_conductivity(3e28, 293.0, db) == doctest::Approx(thermal_conductivity(1e28, 293.0, db)));
    // increasing in both arguments
    CHECK(thermal_conductivity(1e27, 400.0, db) > thermal_conductivity(1e27, 300.0, db));
    CHECK(thermal_conductivity(2e27, 300.0, db) > thermal_conductivity(1e27, 300.0, db));
}

TEST_CASE("diffusivity is Arrhenius with the migration barrier") {
    CHECK(diffusivity(300.0, db) == doctest::Approx(2.69e-22).epsilon(0.01));
    CHECK(diffusivity(600.0, db) == doctest::Approx(3.71e-15).epsilon(0.01));
    CHECK(diffusivity(600.0, db) > diffusivity(300.0, db));
    CHECK_THROWS_AS(diffusivity(-5.0, db), std::invalid_argument);
}

TEST_CASE("drift velocity magnitude, parity and small-field limit") {
    // magnitude at a representative field and temperature
    CHECK(std::abs(drift_velocity(1e8, 500.0, db)) == doctest::Approx(7.1e-7).epsilon(0.02));

    // odd in the gradient
    for (double g : {1e6, 5e7, 3e8}) {
        CHECK(drift_velocity(-g, 440.0, db) == doctest::Approx(-drift_velocity(g, 440.0, db)));
    }

    // small-gradient slope matches the diffusivity through the Einstein-like ratio:
    // v -> -(2 D / (kB T)) * gradient as the gradient vanishes
    double t = 500.0;
    double g = 1e3;
    double slope = drift_velocity(g, t, db) / g;
    double expected = -2.0 * diffusivity(t, db) / (db.boltzmann_ev * t);
    CHECK(slope == doctest::Approx(expected).epsilon(1e-4));

    // polarity: potential falling with height (negative gradient) must push
    // vacancies upward, toward the top electrode
    CHECK(drift_velocity(-2e8, 400.0, db) > 0.0);

    // the sinh argument is clamped, so extreme fields stay finite
    CHECK(std::isfinite(drift_velocity(1e11, 300.0, db)));
    CHECK(std::isfinite(drift_velocity(-1e11, 300.0, db)));
}

TEST_CASE("thermophoresis coefficient") {
    CHECK(soret_coefficient(300.0, db) == doctest::Approx(-0.1096).epsilon(0.005));
    CHECK(soret_coefficient(600.0, db) == doctest::Approx(-0.0274).epsilon(0.005));
    CHECK(soret_coefficient(400.0, db) < 0.0);
}

TEST_CASE("database validation rejects nonsense") {
    MaterialDB bad = db;
    bad.density_pinning = 2e28;  // above saturation
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = db;
    bad.kth_floor = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = db;
    bad.hop_distance = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(db.validate());
}
