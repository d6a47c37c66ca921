#pragma once

#include "taox/compliance.hpp"
#include "taox/coupled.hpp"
#include "taox/materials.hpp"
#include "taox/mesh.hpp"
#include "taox/state.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace taox {

/// Staircase program used for forming and forming-voltage detection.
struct FormingSpec {
    double v_stop = -2.1;    // V, ramp end
    double duration = 1e-2;  // s
    double dwell = 1e-4;     // s per voltage point
    double dt = 2e-5;        // s, integration substep within a dwell
};

/// Pulsed set/reset cycling program.
struct CycleSpec {
    int cycles = 20;
    double set_amplitude = -2.1;    // V
    double set_duration = 1e-2;     // s
    double reset_amplitude = 1.0;   // V
    double reset_duration = 1e-2;   // s
    double dt = 2e-5;               // s, sampling step within the pulses
    double read_bias = -0.1;        // V
    double noise_sigma = 0.05;      // relative lognormal amplitude per set
};

/// Conductivity-slope map settings. Sweep cells run on their own, usually
/// coarser, mesh and pulse step so a full map stays desk-scale.
struct SweepSpec {
    std::vector<double> sigma_slopes;  // filled with an 8-point default axis
    std::vector<double> kth_slopes;
    int cycles = 10;
    MeshResolution resolution{2e-9, 2e-9, 1e-9, 5e-9};
    double dt = 1e-4;     // s, pulse sampling step for sweep cells
    double dwell = 1e-4;  // s, forming staircase dwell for sweep cells
};

struct OutputSpec {
    std::string directory = "out";
    int snapshot_every = 0;  // trace samples between field snapshots; 0 = off
};

struct RunConfig {
    DeviceGeometry geometry;
    MeshResolution resolution;
    MaterialDB materials;
    ComplianceConfig compliance;  // width/depth/sigma follow geometry and materials
    SolverConfig solver;
    NucleationSeed nucleation;
    FormingSpec forming;
    CycleSpec cycling;
    SweepSpec sweep;
    OutputSpec output;
    std::uint64_t seed = 1;
    bool sample_std = false;  // uniformity convention: population by default

    void validate() const;  // throws ConfigError
};

/// Defaults with the derived fields (compliance dimensions, sweep axes)
/// filled in.
RunConfig default_config();

/// Strict parse: unknown keys are errors. Comments (// and /* */) allowed.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Canonical JSON of the effective configuration; stable key order.
std::string dump_config(const RunConfig& cfg);

/// FNV-1a over the canonical dump; ties outputs to the settings making them.
std::uint64_t config_hash(const RunConfig& cfg);

} // namespace taox
