#pragma once

#include "taox/materials.hpp"
#include "taox/mesh.hpp"

#include <vector>

namespace taox {

/// Cell-centred simulation fields. vacancy_density is zero outside the oxide
/// and stays that way; field_magnitude is a cache of the last potential solve.
struct FieldState {
    std::vector<double> vacancy_density;  // m^-3
    std::vector<double> temperature;      // K
    std::vector<double> potential;        // V
    std::vector<double> field_magnitude;  // V/m, derived
    double time = 0.0;                    // s
};

/// Fresh device: uniform densities per oxide layer, ambient temperature,
/// zero potential.
FieldState initial_state(const Mesh& mesh, const MaterialDB& db);

/// Total vacancy count over the oxide, sum of density times cell volume.
double total_vacancies(const FieldState& state, const Mesh& mesh);

/// Gaussian density bump centred on the reservoir/switch interface at the
/// device centre line. Breaks the lateral symmetry so the filament has a
/// preferred nucleation site.
struct NucleationSeed {
    bool enabled = true;
    double relative_amplitude = 0.05;  // fraction of the reservoir density
    double width = 2e-9;               // m, Gaussian sigma
};

void apply_nucleation_seed(FieldState& state, const Mesh& mesh, const MaterialDB& db,
                           const NucleationSeed& seed);

} // namespace taox
