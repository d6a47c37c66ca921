#pragma once

#include "taox/config.hpp"
#include "taox/protocol.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taox {

/// Device voltage at the first trace sample whose current magnitude reaches
/// 95% of the compliance limit; empty when the trace never gets there.
/// First-crossing on recorded samples, no interpolation.
std::optional<double> detect_forming_voltage(const TraceResult& trace, double i_cc);

double median(std::vector<double> values);

/// median(HRS) / median(LRS); medians make the window metric robust against
/// single-cycle outliers.
double resistance_ratio(const std::vector<double>& r_hrs, const std::vector<double>& r_lrs);

/// Standard-deviation-to-mean ratio; population convention by default,
/// sample_std switches to the N-1 normalisation.
double uniformity(const std::vector<double>& values, bool sample_std = false);

enum class ProfileAxis { AlongY, AlongZ };

struct ProfilePoint {
    double coordinate = 0.0;  // m, device coordinates
    double value = 0.0;
};

/// Samples a cell field along a grid line by nearest-cell lookup. Coordinates
/// are reported with z = 0 at the reservoir/switch interface and y = 0 at the
/// device centre. offset picks the line: the fixed y for AlongZ profiles, the
/// fixed z for AlongY profiles, both in device coordinates.
std::vector<ProfilePoint> profile_extract(const std::vector<double>& field, const Mesh& mesh,
                                          ProfileAxis axis, double offset);

struct SweepCell {
    double sigma_slope = 0.0;
    double kth_slope = 0.0;
    bool formed = false;
    double v_f = 0.0;              // V, valid when formed
    double r_hrs = 0.0;            // ohm, median over cycles
    double r_lrs = 0.0;
    double ratio = 0.0;
    double hrs_uniformity = 0.0;
    double lrs_uniformity = 0.0;
    std::string status;            // "ok" or a diagnostic
};

struct SweepMap {
    std::vector<double> sigma_slopes;
    std::vector<double> kth_slopes;
    std::vector<SweepCell> cells;  // index = i_kth * sigma_slopes.size() + i_sigma

    const SweepCell& cell(int i_sigma, int i_kth) const {
        return cells[static_cast<std::size_t>(i_kth) * sigma_slopes.size() + i_sigma];
    }
};

/// One device experiment at the given conductivity slopes on the sweep mesh:
/// forming staircase, then set/reset cycling with the cell's own seed.
/// Failures land in status; never throws.
SweepCell run_sweep_cell(const RunConfig& base, double sigma_slope, double kth_slope,
                         std::uint64_t cell_seed, int cycles);

/// Full map over the configured axes. Cells are independent and individually
/// seeded from the root seed and cell index, so the result is identical for
/// any job count or scheduling order.
SweepMap run_sweep(const RunConfig& base, int jobs);

} // namespace taox
