#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taox {

/**
 * Material parameters for the Pd / TaOx / Ta2O5 stack and the series
 * current-limiting layer. All quantities are SI except the energy barriers,
 * which are in eV and always paired with boltzmann_ev.
 */
struct MaterialDB {
    // vacancy hopping
    double hop_distance       = 3.2e-10;  // m
    double attempt_frequency  = 1e12;     // Hz
    double migration_barrier  = 0.85;     // eV

    // oxide electrical conduction
    double sigma_slope                    = 9.4;     // prefactor gain per unit filling, units of 1e4 S/m
    double sigma_prefactor_floor          = 1e3;     // S/m, prefactor at zero vacancy density
    double conduction_barrier_metallic    = -0.006;  // eV, above the pinning density
    double conduction_barrier_insulating  = 0.05;    // eV, at zero vacancy density
    double density_saturation             = 1e28;    // m^-3, filling that saturates the linear laws
    double density_pinning                = 5e27;    // m^-3, onset of the metallic barrier

    // Poole-Frenkel contribution
    double pf_field_coefficient = 5.48e-4;  // (S/m) per sqrt(V/m)
    double pf_offset            = -5.7;     // S/m

    // oxide thermal conduction
    double kth_slope            = 5.75;   // conductivity gain per unit filling, units of 10 W/(m K)
    double kth_floor            = 0.12;   // W/(m K), at zero vacancy density
    double kth_temp_coefficient = 0.1;    // 1/K
    double reference_temperature = 293.0; // K, anchor for the linear temperature term

    // electrodes (Pd) and oxide bulk
    double pd_sigma           = 1e7;     // S/m
    double pd_kth             = 71.8;    // W/(m K)
    double pd_density         = 11900.0; // kg/m^3
    double pd_heat_capacity   = 50.0;    // J/(kg K)
    double oxide_density      = 8200.0;  // kg/m^3
    double oxide_heat_capacity = 25.0;   // J/(kg K)

    // current-limiting layer base conductivity (used outside the limiting branch)
    double cml_sigma_base = 1e5;  // S/m

    // initial and boundary conditions
    double ambient_temperature       = 300.0;  // K
    double initial_density_reservoir = 1e28;   // m^-3
    double initial_density_switch    = 1e22;   // m^-3

    // physical constants
    double boltzmann_ev     = 8.617333262e-5;   // eV/K
    double elementary_charge = 1.602176634e-19; // C

    // numerical guard on the sinh argument of the drift law
    double sinh_clamp = 50.0;

    void validate() const {
        if (hop_distance <= 0 || attempt_frequency <= 0 || migration_barrier <= 0)
            throw std::invalid_argument("materials: hopping parameters must be positive");
        if (sigma_slope <= 0 || sigma_prefactor_floor <= 0)
            throw std::invalid_argument("materials: conduction prefactor parameters must be positive");
        if (density_saturation <= 0 || density_pinning <= 0 || density_pinning > density_saturation)
            throw std::invalid_argument("materials: density scales must satisfy 0 < pinning <= saturation");
        if (kth_slope <= 0 || kth_floor <= 0)
            throw std::invalid_argument("materials: thermal conductivity parameters must be positive");
        if (reference_temperature <= 0 || ambient_temperature <= 0)
            throw std::invalid_argument("materials: temperatures must be positive");
        if (pd_sigma <= 0 || pd_kth <= 0 || pd_density <= 0 || pd_heat_capacity <= 0 ||
            oxide_density <= 0 || oxide_heat_capacity <= 0)
            throw std::invalid_argument("materials: electrode/oxide bulk constants must be positive");
        if (cml_sigma_base <= 0)
            throw std::invalid_argument("materials: cml_sigma_base must be positive");
        if (initial_density_reservoir < 0 || initial_density_switch < 0)
            throw std::invalid_argument("materials: initial densities must be non-negative");
        if (boltzmann_ev <= 0 || elementary_charge <= 0 || sinh_clamp <= 0)
            throw std::invalid_argument("materials: constants must be positive");
    }
};

namespace detail {
inline void require_density(double n) {
    if (n < 0 || !std::isfinite(n))
        throw std::invalid_argument("vacancy density must be finite and non-negative");
}
inline void require_temperature(double t) {
    if (t <= 0 || !std::isfinite(t))
        throw std::invalid_argument("temperature must be finite and positive");
}
} // namespace detail

/// Conduction prefactor, linear in the vacancy filling fraction and clamped at saturation. [S/m]
inline double sigma_prefactor(double vacancy_density, const MaterialDB& db) {
    detail::require_density(vacancy_density);
    double filling = std::min(vacancy_density / db.density_saturation, 1.0);
    return db.sigma_prefactor_floor + 1e4 * db.sigma_slope * filling;
}

/// Conduction activation barrier [eV]. Pinned at the metallic value above the
/// pinning density, rising linearly to the insulating value as the density drops to zero.
inline double activation_energy(double vacancy_density, const MaterialDB& db) {
    detail::require_density(vacancy_density);
    if (vacancy_density >= db.density_pinning)
        return db.conduction_barrier_metallic;
    double x = vacancy_density / db.density_pinning;
    return db.conduction_barrier_insulating +
           (db.conduction_barrier_metallic - db.conduction_barrier_insulating) * x;
}

/// Field-assisted (Poole-Frenkel) conduction term, clamped at zero below its root. [S/m]
inline double pf_term(double field_magnitude, double temperature, const MaterialDB& db) {
    detail::require_temperature(temperature);
    if (field_magnitude < 0 || !std::isfinite(field_magnitude))
        throw std::invalid_argument("field magnitude must be finite and non-negative");
    double raw = db.pf_field_coefficient * std::sqrt(field_magnitude) + db.pf_offset;
    return std::max(0.0, std::exp(db.reference_temperature / temperature) * raw);
}

/// Oxide electrical conductivity: activated prefactor plus the field-assisted term. [S/m]
inline double sigma_oxide(double vacancy_density, double temperature, double field_magnitude,
                          const MaterialDB& db) {
    detail::require_temperature(temperature);
    double arrhenius = std::exp(-activation_energy(vacancy_density, db) /
                                (db.boltzmann_ev * temperature));
    return sigma_prefactor(vacancy_density, db) * arrhenius +
           pf_term(field_magnitude, temperature, db);
}

/// Oxide thermal conductivity, linear in temperature and in the vacancy filling fraction. [W/(m K)]
inline double thermal_conductivity(double vacancy_density, double temperature, const MaterialDB& db) {
    detail::require_density(vacancy_density);
    detail::require_temperature(temperature);
    double filling = std::min(vacancy_density / db.density_saturation, 1.0);
    return db.kth_floor * (1.0 + db.kth_temp_coefficient * (temperature - db.reference_temperature)) +
           10.0 * db.kth_slope * filling;
}

/// Thermally activated vacancy diffusivity. [m^2/s]
inline double diffusivity(double temperature, const MaterialDB& db) {
    detail::require_temperature(temperature);
    double a = db.hop_distance;
    return 0.5 * a * a * db.attempt_frequency *
           std::exp(-db.migration_barrier / (db.boltzmann_ev * temperature));
}

/**
 * Field-driven hopping velocity along one axis. [m/s]
 *
 * The argument is the potential gradient component along that axis, matching
 * the face fields produced by the potential solver. With the sinh sign below,
 * a negative top-electrode bias (potential decreasing with height) gives a
 * positive, upward velocity, which is the polarity that builds the filament.
 */
inline double drift_velocity(double potential_gradient, double temperature, const MaterialDB& db) {
    detail::require_temperature(temperature);
    double kt = db.boltzmann_ev * temperature;
    // hop_distance * gradient is an energy step in eV per elementary charge
    double arg = -db.hop_distance * potential_gradient / kt;
    arg = std::clamp(arg, -db.sinh_clamp, db.sinh_clamp);
    return db.hop_distance * db.attempt_frequency *
           std::exp(-db.migration_barrier / kt) * std::sinh(arg);
}

/// Thermophoresis coefficient; negative, so the drift term it feeds points up the
/// temperature gradient. [1/K]
inline double soret_coefficient(double temperature, const MaterialDB& db) {
    detail::require_temperature(temperature);
    return -db.migration_barrier / (db.boltzmann_ev * temperature * temperature);
}

} // namespace taox
