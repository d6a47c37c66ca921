#include "taox/state.hpp"

#include <cmath>
#include <stdexcept>

namespace taox {

FieldState initial_state(const Mesh& mesh, const MaterialDB& db) {
    db.validate();
    FieldState s;
    int n = mesh.cell_count();
    s.vacancy_density.assign(n, 0.0);
    s.temperature.assign(n, db.ambient_temperature);
    s.potential.assign(n, 0.0);
    s.field_magnitude.assign(n, 0.0);
    for (int c = 0; c < n; ++c) {
        switch (mesh.region(c)) {
            case Region::Reservoir: s.vacancy_density[c] = db.initial_density_reservoir; break;
            case Region::Switch:    s.vacancy_density[c] = db.initial_density_switch; break;
            default: break;
        }
    }
    return s;
}

double total_vacancies(const FieldState& state, const Mesh& mesh) {
    if (state.vacancy_density.size() != static_cast<std::size_t>(mesh.cell_count()))
        throw std::invalid_argument("total_vacancies: state does not match mesh");
    double sum = 0.0;
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy)
            sum += state.vacancy_density[mesh.cell(iy, iz)] * mesh.volume(iy, iz);
    return sum;
}

void apply_nucleation_seed(FieldState& state, const Mesh& mesh, const MaterialDB& db,
                           const NucleationSeed& seed) {
    if (!seed.enabled || seed.relative_amplitude == 0.0)
        return;
    if (seed.relative_amplitude < 0 || seed.width <= 0)
        throw std::invalid_argument("nucleation seed: amplitude must be >= 0 and width > 0");

    double amplitude = seed.relative_amplitude * db.initial_density_reservoir;
    double yc = mesh.center_y();
    double zc = mesh.interface_z();
    double two_w2 = 2.0 * seed.width * seed.width;
    for (int c : mesh.oxide_cells()) {
        int iy = c % mesh.ny();
        int iz = c / mesh.ny();
        double dy = mesh.yc(iy) - yc;
        double dz = mesh.zc(iz) - zc;
        state.vacancy_density[c] += amplitude * std::exp(-(dy * dy + dz * dz) / two_w2);
    }
}

} // namespace taox
