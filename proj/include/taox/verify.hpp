#pragma once

#include <string>
#include <vector>

namespace taox {

struct CheckResult {
    std::string name;
    bool passed = false;
    double metric = 0.0;     // measured error or convergence order
    double threshold = 0.0;  // bound the metric is held to
    std::string detail;
};

/// Uniform-conductivity stack under 1 V: linear potential and the analytic
/// terminal current, to 1e-8 relative.
CheckResult check_laplace_uniform();

/// Two-layer stack against the series-resistance formula, to 0.1%.
CheckResult check_series_stack();

/// Steady slab with uniform volumetric source against the qL^2/8k peak rise,
/// to 1%.
CheckResult check_heat_slab();

/// Free spreading of a Gaussian density bump against the analytic self-similar
/// profile; pure-diffusion limit of the transport kernel.
CheckResult check_gaussian_diffusion();

/// Zero-bias run on the full device: per-step vacancy conservation to 1e-8
/// relative, no negative density anywhere, temperature pinned at ambient.
CheckResult check_zero_drive_conservation(int steps);

/// Manufactured-solution convergence orders over three mesh levels.
CheckResult check_potential_mms_order();  // expect ~2, bound 1.9
CheckResult check_heat_mms_order();       // transient path, dt ~ h^2; bound 1.9
CheckResult check_transport_mms_order();  // drift-dominated, dt ~ h; bound 0.9

/// The whole suite in a fixed order.
std::vector<CheckResult> run_verification(int conservation_steps = 1000);

} // namespace taox
