#pragma once

#include "taox/mesh.hpp"

#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

namespace taox {

/**
 * Cell-centred finite-volume solver for
 *
 *     mass_i * u_i - sum_faces g_f (u_j - u_i) = rhs_i
 *
 * with conductance g_f = A_f / (h_i/(2 k_i) + h_j/(2 k_j)), i.e. harmonic
 * averaging of the cell coefficient across each face. Boundary conditions are
 * fixed values on the bottom and top z faces and zero flux on the side walls.
 * Cells may additionally be pinned to a fixed value, which removes them from
 * the unknowns. The matrix is symmetric positive definite and solved directly;
 * the symbolic factorisation is reused across calls.
 */
class DiffusionSolver {
public:
    explicit DiffusionSolver(const Mesh& mesh, std::vector<std::uint8_t> pinned = {});

    struct Result {
        std::vector<double> value;    // per cell, pinned cells carry the pinned value
        std::vector<double> grad_y;   // du/dy at y faces, (ny+1)*nz, zero on walls
        std::vector<double> grad_z;   // du/dz at z faces, ny*(nz+1)
        std::vector<double> flux_y;   // k du/dy at y faces
        std::vector<double> flux_z;   // k du/dz at z faces
        double flux_bottom = 0.0;     // integral of k du/dz over the bottom boundary
        double flux_top = 0.0;        // same over the top boundary
        double rel_residual = 0.0;
    };

    /// mass and rhs may be null (treated as zero). Throws SolverError if the
    /// factorisation fails or the residual exceeds linear_tol.
    Result solve(const std::vector<double>& kappa,
                 const std::vector<double>* mass,
                 const std::vector<double>* rhs,
                 double bottom_value, double top_value, double pinned_value,
                 double linear_tol);

private:
    const Mesh& mesh_;
    std::vector<std::uint8_t> pinned_;
    std::vector<int> eq_of_cell_;
    int n_eq_ = 0;
    Eigen::SparseMatrix<double> a_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
    bool analyzed_ = false;
};

} // namespace taox
