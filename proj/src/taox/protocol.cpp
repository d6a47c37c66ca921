#include "taox/protocol.hpp"

#include "taox/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace taox {

TraceResult run_transient(CoupledStepper& stepper, FieldState& state, const Waveform& wf,
                          const TraceObserver& observer) {
    wf.validate();
    TraceResult trace;
    trace.peak_temperature = stepper.db().ambient_temperature;
    bool above = false;
    for (const auto& seg : wf.segments) {
        int n_steps = seg.step_count();
        double dt = seg.duration / n_steps;
        for (int k = 1; k <= n_steps; ++k) {
            double v1 = seg.value(k * dt);
            StepReport rep = stepper.advance(state, v1, dt);
            TraceSample s;
            s.time = state.time;
            s.v1 = v1;
            s.v2 = rep.v2;
            s.current = rep.terminal_current;
            s.t_peak = rep.max_temperature;
            s.n_total = total_vacancies(state, stepper.mesh());
            s.substeps = rep.substeps;
            s.outer_iterations = rep.outer_iterations;
            // When the current limit engages inside this interval, record the
            // substep state that first reached it as its own sample: the
            // device voltage there is the forming voltage, already collapsed
            // by the end of the interval.
            if (rep.crossed && !above && rep.crossing_time != s.time) {
                TraceSample ev = s;
                ev.time = rep.crossing_time;
                ev.v2 = rep.crossing_v2;
                ev.current = rep.crossing_current;
                trace.samples.push_back(ev);
            }
            above = rep.at_compliance;
            trace.samples.push_back(s);
            trace.peak_temperature = std::max(trace.peak_temperature, rep.max_temperature);
            if (observer) observer(s, state);
        }
    }
    return trace;
}

TraceResult dc_sweep(CoupledStepper& stepper, FieldState& state, double v_start, double v_end,
                     double duration, double dwell, double step_dt,
                     const TraceObserver& observer) {
    if (!(dwell > 0.0) || dwell > duration)
        throw std::invalid_argument("dc_sweep: dwell must be in (0, duration]");
    // One pulse segment per voltage point rather than a coarse ramp: the
    // onset of filament growth is a transient comparable to the dwell, and a
    // single implicit step per point relaxes too far toward steady state,
    // letting the device form a few points early.
    Waveform wf;
    int n_levels = std::max(1, static_cast<int>(std::llround(duration / dwell)));
    for (int k = 1; k <= n_levels; ++k) {
        double level = v_start + (v_end - v_start) * (static_cast<double>(k) / n_levels);
        wf.segments.push_back({WaveformSegment::Kind::Pulse, level, level, dwell,
                               std::min(step_dt, dwell)});
    }
    wf.validate();
    return run_transient(stepper, state, wf, observer);
}

double read_resistance(CoupledStepper& stepper, const FieldState& state, double bias) {
    if (bias == 0.0 || !std::isfinite(bias))
        throw std::invalid_argument("read_resistance: bias must be nonzero and finite");
    PotentialResult probe = stepper.probe(state, bias);
    if (probe.terminal_current == 0.0) return std::numeric_limits<double>::infinity();
    return bias / probe.terminal_current;
}

void apply_cycle_noise(FieldState& state, const Mesh& mesh, double relative_sigma,
                       NormalSampler& normal) {
    if (relative_sigma < 0.0)
        throw std::invalid_argument("cycle noise: sigma must be non-negative");
    for (int c : mesh.oxide_cells())
        if (mesh.region(c) == Region::Switch)
            state.vacancy_density[c] *= mean_one_lognormal(normal, relative_sigma);
}

CycleResult run_cycles(CoupledStepper& stepper, FieldState& state, const CycleConfig& cfg) {
    if (cfg.cycles < 1) throw std::invalid_argument("cycles: count must be >= 1");
    cfg.set.validate();
    cfg.reset.validate();
    NormalSampler normal(cfg.seed);
    CycleResult out;
    out.peak_temperature = stepper.db().ambient_temperature;
    auto absorb = [&out](TraceResult&& part) {
        out.peak_temperature = std::max(out.peak_temperature, part.peak_temperature);
        out.trace.samples.insert(out.trace.samples.end(), part.samples.begin(),
                                 part.samples.end());
    };
    const bool saved_limit = stepper.config().limit_current;
    for (int cycle = 0; cycle < cfg.cycles; ++cycle) {
        try {
            apply_cycle_noise(state, stepper.mesh(), cfg.noise_sigma, normal);
            stepper.set_current_limit(true);
            absorb(run_transient(stepper, state, cfg.set));
            out.r_lrs.push_back(read_resistance(stepper, state, cfg.read_bias));
            // Reset runs without the current limit: the limiting layer stays
            // at its base conductivity for the whole positive program.
            stepper.set_current_limit(false);
            absorb(run_transient(stepper, state, cfg.reset));
            out.r_hrs.push_back(read_resistance(stepper, state, cfg.read_bias));
        } catch (const SolverError& e) {
            stepper.set_current_limit(saved_limit);
            throw SolverError("cycle " + std::to_string(cycle + 1) + ": " + e.what(), e.residual,
                              e.iterations);
        }
    }
    stepper.set_current_limit(saved_limit);
    out.trace.peak_temperature = out.peak_temperature;
    return out;
}

} // namespace taox
