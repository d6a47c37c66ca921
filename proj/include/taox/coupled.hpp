#pragma once

#include "taox/compliance.hpp"
#include "taox/heat.hpp"
#include "taox/potential.hpp"
#include "taox/state.hpp"
#include "taox/transport.hpp"

#include <vector>

namespace taox {

struct SolverConfig {
    double dt = 2e-5;            // s, base step; halved on convergence failure
    double outer_tol = 1e-6;     // relative change, temperature and density
    int outer_max_iters = 120;
    double damping = 0.7;        // fallback relaxation of the joint iterate
    double linear_tol = 1e-10;
    int max_step_halvings = 12;
    double picard_tol = 1e-8;    // conductivity loop inside the potential solve
    int picard_max_iters = 120;
    bool limit_current = true;
    bool freeze_transport = false;  // hold the density fixed; diagnostic sweeps

    void validate() const;  // throws std::invalid_argument
};

struct StepReport {
    int outer_iterations = 0;    // worst substep
    int substeps = 1;
    double min_dt = 0.0;
    double terminal_current = 0.0;  // A, at the end of the step
    double v2 = 0.0;                // V, top electrode surface potential
    double sigma_cml = 0.0;         // S/m
    double max_temperature = 0.0;   // K

    // Compliance bookkeeping at substep resolution. A forming event usually
    // runs to completion inside one sampling interval, so the end-of-step
    // values alone would miss the device voltage at the moment the current
    // limit engaged.
    bool at_compliance = false;     // end-of-step current at or above the detection threshold
    bool crossed = false;           // some substep ended at or above it
    double crossing_time = 0.0;     // s, end of the earliest such substep
    double crossing_v2 = 0.0;       // V
    double crossing_current = 0.0;  // A
};

/**
 * Advances the coupled potential / heat / transport system by one implicit
 * step. The three solves are iterated to a joint fixed point: the potential
 * solve supplies the Joule source sigma |E|^2, the heat step updates the
 * temperature entering the conductivities and the transport coefficients,
 * and the transport step moves the density entering the potential solve.
 * The joint temperature/density iterate is Anderson-mixed over a short
 * residual history; the accepted density is always a raw transport solve so
 * the step conserves the vacancy total exactly.
 * If the fixed point stalls the step is retried as two half steps, recursively.
 */
class CoupledStepper {
public:
    CoupledStepper(const Mesh& mesh, const MaterialDB& db, const ComplianceConfig& compliance,
                   const SolverConfig& cfg);

    StepReport advance(FieldState& state, double v1, double dt);

    /// Potential solve against the current density at an arbitrary bias with
    /// the whole device at ambient temperature. Does not touch the state;
    /// resistance reads and post-quench I-V points use this.
    PotentialResult probe(const FieldState& state, double v1);

    /// Off holds the limiting layer at its base conductivity; reset programs
    /// run this way.
    void set_current_limit(bool on);

    const SolverConfig& config() const { return cfg_; }
    const Mesh& mesh() const { return mesh_; }
    const MaterialDB& db() const { return db_; }

private:
    StepReport attempt(FieldState& state, double v1, double dt);
    StepReport advance_impl(FieldState& state, double v1, double dt, int depth);

    const Mesh& mesh_;
    const MaterialDB& db_;
    ComplianceConfig compliance_;
    SolverConfig cfg_;
    PotentialSolver potential_;
    HeatSolver heat_;
    TransportSolver transport_;
};

} // namespace taox
