#pragma once

#include "taox/coupled.hpp"
#include "taox/rng.hpp"
#include "taox/waveform.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace taox {

struct TraceSample {
    double time = 0.0;     // s, state time at the end of the interval
    double v1 = 0.0;       // V, applied bias over the interval
    double v2 = 0.0;       // V, top electrode surface potential
    double current = 0.0;  // A, terminal current
    double t_peak = 0.0;   // K, peak temperature during the interval
    double n_total = 0.0;  // total vacancy count
    int substeps = 1;
    int outer_iterations = 0;
};

struct TraceResult {
    std::vector<TraceSample> samples;
    double peak_temperature = 0.0;  // K, max over the whole run
};

/// Called after every recorded sample, e.g. to write field snapshots.
using TraceObserver = std::function<void(const TraceSample&, const FieldState&)>;

/// Drives the stepper over the waveform, one coupled step per sampling
/// interval, recording a sample at the end of each.
TraceResult run_transient(CoupledStepper& stepper, FieldState& state, const Waveform& wf,
                          const TraceObserver& observer = {});

/// Quasi-static staircase sweep: each voltage point is held for one dwell
/// interval, integrated in substeps of step_dt. The (v2, current) columns of
/// the result are the I-V curve.
TraceResult dc_sweep(CoupledStepper& stepper, FieldState& state, double v_start, double v_end,
                     double duration, double dwell, double step_dt = 2e-5,
                     const TraceObserver& observer = {});

/// Resistance bias/current from a potential probe at ambient temperature.
/// The density is left untouched, so a read does not disturb the state.
double read_resistance(CoupledStepper& stepper, const FieldState& state, double bias);

/// Cycle-to-cycle variability source: multiplies the density of every cell in
/// the switch layer by an independent unit-mean lognormal factor.
void apply_cycle_noise(FieldState& state, const Mesh& mesh, double relative_sigma,
                       NormalSampler& normal);

struct CycleConfig {
    int cycles = 20;
    Waveform set;    // negative-going program, drives the device to LRS
    Waveform reset;  // positive-going program, drives the device to HRS
    double read_bias = -0.1;  // V
    double noise_sigma = 0.05;
    std::uint64_t seed = 1;
};

struct CycleResult {
    std::vector<double> r_lrs;  // ohm, read after each set
    std::vector<double> r_hrs;  // ohm, read after each reset
    double peak_temperature = 0.0;
    TraceResult trace;  // all program pulses concatenated in time order
};

/// Runs set/read/reset/read cycles on an already-formed state. Noise is
/// applied at the start of every set program.
CycleResult run_cycles(CoupledStepper& stepper, FieldState& state, const CycleConfig& cfg);

} // namespace taox
