#pragma once

#include "taox/materials.hpp"
#include "taox/mesh.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace taox {

/// x / (e^x - 1), continuous through zero and safe against overflow.
double bernoulli(double x);

/// Face-centred coefficients for a transport step. Arrays use the full-mesh
/// face layout (y faces: iz*(ny+1)+iy, z faces: iz*ny+iy); only faces between
/// two oxide cells are read. source, if set, is a per-cell volumetric rate.
struct TransportCoefficients {
    std::vector<double> diff_y, diff_z;  // m^2/s
    std::vector<double> vel_y, vel_z;    // m/s, positive toward increasing coordinate
    const std::vector<double>* source = nullptr;  // m^-3 s^-1
};

/**
 * Implicit vacancy transport on the oxide subdomain. The flux through a face
 * combines diffusion with drift and thermodiffusion advection and is
 * discretised with exponential fitting:
 *
 *     F = A (D/h) [B(-Pe) n_i - B(Pe) n_j],   Pe = u h / D
 *
 * which reduces to central diffusion at Pe = 0 and to upwinding for |Pe| >> 1.
 * All off-diagonal entries are non-positive and column sums of the flux part
 * vanish, so a backward Euler step conserves the total vacancy count exactly
 * and cannot produce negative densities. Electrodes block vacancy exchange:
 * every oxide boundary face carries zero flux.
 */
class TransportSolver {
public:
    struct Options {
        double linear_tol = 1e-10;
    };

    TransportSolver(const Mesh& mesh, const MaterialDB& db, const Options& opt);
    TransportSolver(const Mesh& mesh, const MaterialDB& db)
        : TransportSolver(mesh, db, Options{}) {}

    struct Result {
        std::vector<double> density;  // full-mesh layout, zero outside the oxide
        double max_change = 0.0;      // max |n_new - n_old| / density_saturation
        double rel_residual = 0.0;
    };

    /// Physics step: coefficients from the current potential and temperature.
    Result step(const std::vector<double>& n_old, const std::vector<double>& psi,
                const std::vector<double>& temperature, double dt);

    /// Kernel with caller-supplied coefficients; the verification problems
    /// drive it directly.
    Result step_with_coefficients(const std::vector<double>& n_old,
                                  const TransportCoefficients& coeffs, double dt);

    /// Face diffusivities (harmonic), drift velocity from the potential
    /// gradient and thermodiffusion velocity -D S dT/dx, all at face centres.
    TransportCoefficients physics_coefficients(const std::vector<double>& psi,
                                               const std::vector<double>& temperature) const;

private:
    struct Face {
        int ci, cj;      // cell ids, ci on the lower-coordinate side
        int index;       // position in the per-axis face array
        bool along_z;
        double area, h;  // face area and centre-to-centre distance
    };

    const Mesh& mesh_;
    const MaterialDB& db_;
    Options opt_;
    std::vector<Face> faces_;  // interior oxide-oxide faces
    Eigen::SparseMatrix<double> a_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool analyzed_ = false;
};

} // namespace taox
