#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taox/config.hpp"
#include "taox/coupled.hpp"
#include "taox/errors.hpp"
#include "taox/state.hpp"

#include <cmath>
#include <vector>

using namespace taox;

namespace {

// Coarse device rig: the sweep-resolution mesh keeps each implicit step at a
// few tens of milliseconds so the coupled checks stay quick.
struct Rig {
    RunConfig cfg = default_config();
    Mesh mesh;
    FieldState state;
    CoupledStepper stepper;

    Rig()
        : mesh(build_mesh(cfg.geometry, cfg.sweep.resolution)),
          state(initial_state(mesh, cfg.materials)),
          stepper(mesh, cfg.materials, cfg.compliance, cfg.solver) {}
};

double oxide_total(const Mesh& mesh, const std::vector<double>& n) {
    double total = 0.0;
    for (int c : mesh.oxide_cells()) total += n[c] * mesh.volume(c % mesh.ny(), c / mesh.ny());
    return total;
}

// Saturates the switch layer so the stack conducts like a formed device.
void saturate_switch(FieldState& state, const Mesh& mesh, const MaterialDB& db) {
    for (int c : mesh.oxide_cells())
        if (mesh.region(c) == Region::Switch) state.vacancy_density[c] = db.density_saturation;
}

} // namespace

TEST_CASE("solver config validation rejects out-of-range settings") {
    SolverConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto expect_throw = [](SolverConfig bad) {
        CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    };
    {
        SolverConfig bad;
        bad.dt = 0.0;
        expect_throw(bad);
    }
    {
        SolverConfig bad;
        bad.damping = 0.0;
        expect_throw(bad);
    }
    {
        SolverConfig bad;
        bad.damping = 1.5;
        expect_throw(bad);
    }
    {
        SolverConfig bad;
        bad.outer_max_iters = 0;
        expect_throw(bad);
    }
    {
        SolverConfig bad;
        bad.max_step_halvings = 41;
        expect_throw(bad);
    }
}

TEST_CASE("zero-bias step leaves the equilibrium state alone") {
    Rig rig;
    std::vector<double> n_before = rig.state.vacancy_density;
    StepReport rep = rig.stepper.advance(rig.state, 0.0, 1e-4);
    CHECK(rep.terminal_current == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.v2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rep.substeps == 1);
    CHECK(rep.max_temperature ==
          doctest::Approx(rig.cfg.materials.ambient_temperature).epsilon(1e-9));
    // Fick flux does smooth the reservoir/switch interface step, but at
    // ambient temperature the per-step motion is parts in 10^7 of saturation.
    for (int c : rig.mesh.oxide_cells())
        CHECK(std::abs(rig.state.vacancy_density[c] - n_before[c]) <
              1e-4 * rig.cfg.materials.density_saturation);
    CHECK(rig.state.time == doctest::Approx(1e-4));
}

TEST_CASE("biased step conserves vacancies and heats the stack") {
    Rig rig;
    double total_before = oxide_total(rig.mesh, rig.state.vacancy_density);
    StepReport rep = rig.stepper.advance(rig.state, -1.0, 1e-4);
    double total_after = oxide_total(rig.mesh, rig.state.vacancy_density);
    CHECK(std::abs(total_after - total_before) / total_before < 1e-8);
    // negative top bias drives a negative terminal current
    CHECK(rep.terminal_current < 0.0);
    CHECK(std::abs(rep.v2) <= 1.0);
    CHECK(rep.max_temperature > rig.cfg.materials.ambient_temperature);
    CHECK(rep.min_dt <= 1e-4);
    for (int c : rig.mesh.oxide_cells()) CHECK(rig.state.vacancy_density[c] >= 0.0);
}

TEST_CASE("probe reads the state without disturbing it") {
    Rig rig;
    saturate_switch(rig.state, rig.mesh, rig.cfg.materials);
    FieldState copy = rig.state;
    PotentialResult probe = rig.stepper.probe(rig.state, -0.1);
    CHECK(probe.terminal_current < 0.0);
    CHECK(rig.state.vacancy_density == copy.vacancy_density);
    CHECK(rig.state.temperature == copy.temperature);
    CHECK(rig.state.time == copy.time);
    // formed stack at the read bias is far below the compliance threshold
    CHECK(std::abs(probe.terminal_current) <
          kComplianceDetectionFraction * rig.cfg.compliance.i_cc);
}

TEST_CASE("frozen transport holds the density while the temperature moves") {
    Rig rig;
    rig.cfg.solver.freeze_transport = true;
    CoupledStepper frozen(rig.mesh, rig.cfg.materials, rig.cfg.compliance, rig.cfg.solver);
    saturate_switch(rig.state, rig.mesh, rig.cfg.materials);
    std::vector<double> n_before = rig.state.vacancy_density;
    StepReport rep = frozen.advance(rig.state, -0.8, 1e-4);
    CHECK(rig.state.vacancy_density == n_before);
    CHECK(rep.max_temperature > rig.cfg.materials.ambient_temperature + 1.0);
}

TEST_CASE("current limit clamps a conducting stack and can be released") {
    Rig rig;
    saturate_switch(rig.state, rig.mesh, rig.cfg.materials);

    // Same formed state and reset-polarity bias, limit on versus off: the
    // clamp caps the current, releasing it restores the base layer.
    FieldState limited = rig.state;
    StepReport on = rig.stepper.advance(limited, 1.0, 2e-5);
    CHECK(std::abs(on.terminal_current) <= 1.1 * rig.cfg.compliance.i_cc);
    CHECK(on.at_compliance);
    CHECK(on.crossed);
    CHECK(on.crossing_time == doctest::Approx(limited.time));
    CHECK(std::abs(on.crossing_current) >=
          kComplianceDetectionFraction * rig.cfg.compliance.i_cc);
    // the limiting layer absorbs most of the applied bias once clamped
    CHECK(std::abs(on.v2) < 1.0);
    CHECK(on.sigma_cml < rig.cfg.compliance.sigma_base);

    rig.stepper.set_current_limit(false);
    CHECK_FALSE(rig.stepper.config().limit_current);
    FieldState open = rig.state;
    StepReport off = rig.stepper.advance(open, 1.0, 2e-5);
    CHECK(std::abs(off.terminal_current) > std::abs(on.terminal_current));
    CHECK(std::abs(off.terminal_current) > 1.5 * rig.cfg.compliance.i_cc);
    CHECK(off.sigma_cml == doctest::Approx(rig.cfg.compliance.sigma_base));
    rig.stepper.set_current_limit(true);
    CHECK(rig.stepper.config().limit_current);
}

TEST_CASE("exhausted iteration budget surfaces as a solver error") {
    Rig rig;
    rig.cfg.solver.outer_max_iters = 1;
    rig.cfg.solver.outer_tol = 1e-300;
    rig.cfg.solver.max_step_halvings = 2;
    CoupledStepper strict(rig.mesh, rig.cfg.materials, rig.cfg.compliance, rig.cfg.solver);
    saturate_switch(rig.state, rig.mesh, rig.cfg.materials);
    try {
        strict.advance(rig.state, -1.5, 1e-4);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.residual > 0.0);
        CHECK(e.iterations == 1);
    }
}
