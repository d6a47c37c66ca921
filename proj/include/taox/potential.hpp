#pragma once

#include "taox/compliance.hpp"
#include "taox/diffusion.hpp"
#include "taox/materials.hpp"
#include "taox/mesh.hpp"

#include <vector>

namespace taox {

struct PotentialResult {
    std::vector<double> psi;              // per cell, V
    std::vector<double> sigma;            // per cell, S/m, as used in the final solve
    std::vector<double> grad_y;           // d(psi)/dy at y faces
    std::vector<double> grad_z;           // d(psi)/dz at z faces
    std::vector<double> field_magnitude;  // per cell, |J|/sigma
    double terminal_current = 0.0;        // A, through the bottom contact, sign of v1
    double current_top = 0.0;             // A, through the top contact, for balance checks
    double v2 = 0.0;                      // V, mean potential over the top electrode surface
    double sigma_cml = 0.0;               // S/m, limiting layer value after updates
    int picard_iterations = 0;
    double rel_residual = 0.0;            // of the last linear solve
};

/**
 * Solves div(sigma grad psi) = 0 with psi = 0 on the bottom face and
 * psi = v1 on the top face. The oxide conductivity depends on the local field
 * through the Poole-Frenkel term and the limiting layer conductivity depends
 * on the drop across it, so the linear solve sits inside a Picard loop that
 * refreshes both until the conductivity map stops moving. Updates are damped
 * in log space since sigma spans many orders of magnitude.
 *
 * The per-cell field magnitude is reconstructed as |J|/sigma with J averaged
 * from the face current densities. Evaluating sigma grad psi directly at cell
 * centres is wrong at material interfaces: the averaged gradient leaks the
 * oxide-side field into the metal cells, where multiplying by the metal
 * conductivity fabricates enormous currents (and later Joule heat).
 */
class PotentialSolver {
public:
    struct Options {
        double tol = 1e-8;        // max relative sigma change for convergence
        int max_iters = 120;
        double damping = 0.7;     // fraction of the log-space update applied
        double linear_tol = 1e-10;
        bool limit_current = true;
    };

    PotentialSolver(const Mesh& mesh, const MaterialDB& db, const ComplianceConfig& compliance,
                    const Options& opt);
    PotentialSolver(const Mesh& mesh, const MaterialDB& db, const ComplianceConfig& compliance)
        : PotentialSolver(mesh, db, compliance, Options{}) {}

    /// field_guess warm-starts the Poole-Frenkel evaluation; pass the
    /// field_magnitude of a previous result when stepping in time.
    PotentialResult solve(double v1, const std::vector<double>& density,
                          const std::vector<double>& temperature,
                          const std::vector<double>* field_guess = nullptr);

    /// Off holds the limiting layer at its base conductivity; reset programs
    /// run this way.
    void set_current_limit(bool on) { opt_.limit_current = on; }
    bool current_limit() const { return opt_.limit_current; }

private:
    const Mesh& mesh_;
    const MaterialDB& db_;
    ComplianceConfig compliance_;
    Options opt_;
    DiffusionSolver linear_;
};

/// |J|/sigma per cell from the face-centred current densities of a solve.
std::vector<double> cell_field_magnitude(const Mesh& mesh, const DiffusionSolver::Result& sol,
                                         const std::vector<double>& sigma);

} // namespace taox
