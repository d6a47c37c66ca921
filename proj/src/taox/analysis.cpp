#include "taox/analysis.hpp"

#include "taox/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace taox {

std::optional<double> detect_forming_voltage(const TraceResult& trace, double i_cc) {
    if (!(i_cc > 0.0)) throw std::invalid_argument("forming voltage: i_cc must be positive");
    for (const auto& s : trace.samples)
        if (std::abs(s.current) >= kComplianceDetectionFraction * i_cc) return s.v2;
    return std::nullopt;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

void require_positive(const std::vector<double>& values, const char* who) {
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": values must be finite and positive");
}

} // namespace

double resistance_ratio(const std::vector<double>& r_hrs, const std::vector<double>& r_lrs) {
    if (r_hrs.empty() || r_lrs.empty())
        throw std::invalid_argument("resistance ratio: empty input");
    require_positive(r_hrs, "resistance ratio");
    require_positive(r_lrs, "resistance ratio");
    return median(r_hrs) / median(r_lrs);
}

double uniformity(const std::vector<double>& values, bool sample_std) {
    if (values.size() < 2) throw std::invalid_argument("uniformity: need at least 2 values");
    require_positive(values, "uniformity");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double denom = sample_std ? values.size() - 1.0 : static_cast<double>(values.size());
    return std::sqrt(ss / denom) / mean;
}

std::vector<ProfilePoint> profile_extract(const std::vector<double>& field, const Mesh& mesh,
                                          ProfileAxis axis, double offset) {
    if (field.size() != static_cast<std::size_t>(mesh.cell_count()))
        throw std::invalid_argument("profile: field size does not match mesh");

    auto nearest = [](const std::vector<double>& centers, double x) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(centers.size()); ++i)
            if (std::abs(centers[i] - x) < std::abs(centers[best] - x)) best = i;
        return best;
    };

    std::vector<ProfilePoint> out;
    if (axis == ProfileAxis::AlongZ) {
        double y_abs = mesh.center_y() + offset;
        if (y_abs < mesh.y_faces().front() || y_abs > mesh.y_faces().back())
            throw std::invalid_argument("profile: line outside the mesh");
        std::vector<double> yc(mesh.ny());
        for (int iy = 0; iy < mesh.ny(); ++iy) yc[iy] = mesh.yc(iy);
        int iy = nearest(yc, y_abs);
        out.reserve(mesh.nz());
        for (int iz = 0; iz < mesh.nz(); ++iz)
            out.push_back({mesh.zc(iz) - mesh.interface_z(), field[mesh.cell(iy, iz)]});
    } else {
        double z_abs = mesh.interface_z() + offset;
        if (z_abs < mesh.z_faces().front() || z_abs > mesh.z_faces().back())
            throw std::invalid_argument("profile: line outside the mesh");
        std::vector<double> zc(mesh.nz());
        for (int iz = 0; iz < mesh.nz(); ++iz) zc[iz] = mesh.zc(iz);
        int iz = nearest(zc, z_abs);
        out.reserve(mesh.ny());
        for (int iy = 0; iy < mesh.ny(); ++iy)
            out.push_back({mesh.yc(iy) - mesh.center_y(), field[mesh.cell(iy, iz)]});
    }
    return out;
}

SweepCell run_sweep_cell(const RunConfig& base, double sigma_slope, double kth_slope,
                         std::uint64_t cell_seed, int cycles) {
    SweepCell cell;
    cell.sigma_slope = sigma_slope;
    cell.kth_slope = kth_slope;
    try {
        MaterialDB db = base.materials;
        db.sigma_slope = sigma_slope;
        db.kth_slope = kth_slope;
        db.validate();

        Mesh mesh = build_mesh(base.geometry, base.sweep.resolution);
        FieldState state = initial_state(mesh, db);
        apply_nucleation_seed(state, mesh, db, base.nucleation);
        CoupledStepper stepper(mesh, db, base.compliance, base.solver);

        TraceResult forming = dc_sweep(stepper, state, 0.0, base.forming.v_stop,
                                       base.forming.duration, base.sweep.dwell, base.sweep.dt);
        auto v_f = detect_forming_voltage(forming, base.compliance.i_cc);
        if (!v_f) {
            cell.status = "no-forming";
            return cell;
        }
        cell.formed = true;
        cell.v_f = *v_f;

        CycleConfig cc;
        cc.cycles = cycles;
        cc.set = pulse_waveform(base.cycling.set_amplitude, base.cycling.set_duration,
                                base.sweep.dt);
        cc.reset = pulse_waveform(base.cycling.reset_amplitude, base.cycling.reset_duration,
                                  base.sweep.dt);
        cc.read_bias = base.cycling.read_bias;
        cc.noise_sigma = base.cycling.noise_sigma;
        cc.seed = cell_seed;
        CycleResult cycles_out = run_cycles(stepper, state, cc);

        cell.r_hrs = median(cycles_out.r_hrs);
        cell.r_lrs = median(cycles_out.r_lrs);
        cell.ratio = resistance_ratio(cycles_out.r_hrs, cycles_out.r_lrs);
        cell.hrs_uniformity = uniformity(cycles_out.r_hrs, base.sample_std);
        cell.lrs_uniformity = uniformity(cycles_out.r_lrs, base.sample_std);
        cell.status = "ok";
    } catch (const std::exception& e) {
        cell.status = e.what();
    }
    return cell;
}

SweepMap run_sweep(const RunConfig& base, int jobs) {
    SweepMap map;
    map.sigma_slopes = base.sweep.sigma_slopes;
    map.kth_slopes = base.sweep.kth_slopes;
    const int n1 = static_cast<int>(map.sigma_slopes.size());
    const int n2 = static_cast<int>(map.kth_slopes.size());
    map.cells.resize(static_cast<std::size_t>(n1) * n2);

    if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min<int>(jobs, n1 * n2);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int idx = next.fetch_add(1);
            if (idx >= n1 * n2) return;
            int i_sigma = idx % n1;
            int i_kth = idx / n1;
            map.cells[idx] =
                run_sweep_cell(base, map.sigma_slopes[i_sigma], map.kth_slopes[i_kth],
                               derive_seed(base.seed, static_cast<std::uint64_t>(idx)),
                               base.sweep.cycles);
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return map;
}

} // namespace taox
