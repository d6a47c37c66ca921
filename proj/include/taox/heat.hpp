#pragma once

#include "taox/diffusion.hpp"
#include "taox/materials.hpp"
#include "taox/mesh.hpp"

#include <vector>

namespace taox {

/**
 * Backward Euler step of rho cp dT/dt - div(k grad T) = q. The ambient value
 * is imposed on the bottom and top domain faces and on every limiting-layer
 * cell, which keeps that artificial series element from acting as a heater;
 * the side walls are adiabatic. The oxide conductivity depends on vacancy
 * density and temperature and is evaluated at the input temperature, so one
 * step is linear; the surrounding coupling loop closes the lag.
 */
class HeatSolver {
public:
    struct Options {
        double linear_tol = 1e-10;
    };

    HeatSolver(const Mesh& mesh, const MaterialDB& db, const Options& opt);
    HeatSolver(const Mesh& mesh, const MaterialDB& db) : HeatSolver(mesh, db, Options{}) {}

    struct Result {
        std::vector<double> temperature;  // K
        double max_temperature = 0.0;
        double rel_residual = 0.0;
    };

    /// q_vol is the volumetric heating rate per cell in W/m^3. dt <= 0 solves
    /// the steady problem instead of a transient step.
    Result step(const std::vector<double>& t_old, const std::vector<double>& density,
                const std::vector<double>& q_vol, double dt);

private:
    const Mesh& mesh_;
    const MaterialDB& db_;
    Options opt_;
    DiffusionSolver linear_;
};

} // namespace taox
