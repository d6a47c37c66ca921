#include "taox/heat.hpp"

#include <algorithm>
#include <stdexcept>

namespace taox {

namespace {

std::vector<std::uint8_t> cml_mask(const Mesh& mesh) {
    std::vector<std::uint8_t> pinned(mesh.cell_count(), 0);
    for (int c = 0; c < mesh.cell_count(); ++c)
        if (mesh.region(c) == Region::Cml) pinned[c] = 1;
    return pinned;
}

} // namespace

HeatSolver::HeatSolver(const Mesh& mesh, const MaterialDB& db, const Options& opt)
    : mesh_(mesh), db_(db), opt_(opt), linear_(mesh, cml_mask(mesh)) {}

HeatSolver::Result HeatSolver::step(const std::vector<double>& t_old,
                                    const std::vector<double>& density,
                                    const std::vector<double>& q_vol, double dt) {
    const int n = mesh_.cell_count();
    if (static_cast<int>(t_old.size()) != n || static_cast<int>(density.size()) != n ||
        static_cast<int>(q_vol.size()) != n)
        throw std::invalid_argument("heat: field size does not match mesh");

    std::vector<double> kth(n), mass(n, 0.0), rhs(n);
    for (int iz = 0; iz < mesh_.nz(); ++iz) {
        for (int iy = 0; iy < mesh_.ny(); ++iy) {
            int c = mesh_.cell(iy, iz);
            double rho_cp;
            if (is_oxide(mesh_.region(c))) {
                kth[c] = thermal_conductivity(density[c], t_old[c], db_);
                rho_cp = db_.oxide_density * db_.oxide_heat_capacity;
            } else {
                kth[c] = db_.pd_kth;
                rho_cp = db_.pd_density * db_.pd_heat_capacity;
            }
            double vol = mesh_.volume(iy, iz);
            if (dt > 0.0) mass[c] = rho_cp * vol / dt;
            rhs[c] = mass[c] * t_old[c] + q_vol[c] * vol;
        }
    }

    auto sol = linear_.solve(kth, dt > 0.0 ? &mass : nullptr, &rhs, db_.ambient_temperature,
                             db_.ambient_temperature, db_.ambient_temperature, opt_.linear_tol);

    Result out;
    out.temperature = std::move(sol.value);
    out.max_temperature = *std::max_element(out.temperature.begin(), out.temperature.end());
    out.rel_residual = sol.rel_residual;
    return out;
}

} // namespace taox
