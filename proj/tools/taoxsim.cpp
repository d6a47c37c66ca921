#include "taox/analysis.hpp"
#include "taox/config.hpp"
#include "taox/errors.hpp"
#include "taox/io.hpp"
#include "taox/protocol.hpp"
#include "taox/verify.hpp"
#include "taox/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace taox;

namespace {

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int jobs = 0;        // sweep: 0 = one thread per hardware core
    int cycles = 0;      // cycle: 0 = take the configured count
};

void add_common(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "JSON configuration file (defaults baked in)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Override the root random seed");
    sub->add_option("--out", opt.out_dir, "Output directory (overrides the configured one)");
}

RunConfig make_config(const CliOptions& opt) {
    RunConfig cfg = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (!opt.out_dir.empty()) cfg.output.directory = opt.out_dir;
    cfg.validate();
    return cfg;
}

std::string hash_hex(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> metadata_for(const RunConfig& cfg) {
    return {std::string("taoxsim ") + kVersion, "seed " + std::to_string(cfg.seed),
            "config " + hash_hex(config_hash(cfg))};
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_summary(const std::string& path, const std::vector<std::string>& metadata,
                   const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    for (const auto& line : metadata) out << "# " << line << "\n";
    for (const auto& [key, value] : rows) out << key << " " << value << "\n";
}

void echo_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
    for (const auto& [key, value] : rows) std::cout << key << " " << value << "\n";
}

/// Device experiment owning the mesh, state and stepper for one run.
struct Experiment {
    Mesh mesh;
    FieldState state;
    CoupledStepper stepper;

    explicit Experiment(const RunConfig& cfg)
        : mesh(build_mesh(cfg.geometry, cfg.resolution)),
          state(initial_state(mesh, cfg.materials)),
          stepper(mesh, cfg.materials, cfg.compliance, cfg.solver) {
        apply_nucleation_seed(state, mesh, cfg.materials, cfg.nucleation);
    }
};

TraceResult run_forming(const RunConfig& cfg, Experiment& ex, const TraceObserver& observer = {}) {
    return dc_sweep(ex.stepper, ex.state, 0.0, cfg.forming.v_stop, cfg.forming.duration,
                    cfg.forming.dwell, cfg.forming.dt, observer);
}

CycleConfig cycle_config(const RunConfig& cfg, int cycles) {
    CycleConfig cc;
    cc.cycles = cycles;
    cc.set = pulse_waveform(cfg.cycling.set_amplitude, cfg.cycling.set_duration, cfg.cycling.dt);
    cc.reset =
        pulse_waveform(cfg.cycling.reset_amplitude, cfg.cycling.reset_duration, cfg.cycling.dt);
    cc.read_bias = cfg.cycling.read_bias;
    cc.noise_sigma = cfg.cycling.noise_sigma;
    cc.seed = cfg.seed;
    return cc;
}

int cmd_form(const CliOptions& opt, std::string& diag_dir) {
    RunConfig cfg = make_config(opt);
    auto meta = metadata_for(cfg);
    fs::create_directories(cfg.output.directory);
    diag_dir = cfg.output.directory;

    Experiment ex(cfg);
    double r_initial = read_resistance(ex.stepper, ex.state, cfg.cycling.read_bias);

    int sample_index = 0;
    TraceObserver observer;
    if (cfg.output.snapshot_every > 0) {
        observer = [&](const TraceSample&, const FieldState& s) {
            ++sample_index;
            if (sample_index % cfg.output.snapshot_every != 0) return;
            char name[48];
            std::snprintf(name, sizeof(name), "snapshot_%06d.vtk", sample_index);
            write_snapshot_vtk(join(cfg.output.directory, name), ex.mesh, s);
        };
    }

    TraceResult trace = run_forming(cfg, ex, observer);
    std::optional<double> v_f = detect_forming_voltage(trace, cfg.compliance.i_cc);
    double r_final = read_resistance(ex.stepper, ex.state, cfg.cycling.read_bias);

    write_trace_csv(join(cfg.output.directory, "forming_trace.csv"), trace, meta);
    write_snapshot_vtk(join(cfg.output.directory, "final_state.vtk"), ex.mesh, ex.state);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("status", v_f ? "formed" : "no-forming");
    rows.emplace_back("forming_voltage_V", v_f ? format_double(*v_f) : "none");
    rows.emplace_back("r_initial_ohm", format_double(r_initial));
    rows.emplace_back("r_final_ohm", format_double(r_final));
    rows.emplace_back("resistance_drop", format_double(r_initial / r_final));
    rows.emplace_back("peak_temperature_K", format_double(trace.peak_temperature));
    rows.emplace_back("samples", std::to_string(trace.samples.size()));
    write_summary(join(cfg.output.directory, "summary.txt"), meta, rows);
    echo_rows(rows);
    return 0;
}

int cmd_cycle(const CliOptions& opt, std::string& diag_dir) {
    RunConfig cfg = make_config(opt);
    auto meta = metadata_for(cfg);
    fs::create_directories(cfg.output.directory);
    diag_dir = cfg.output.directory;

    int cycles = opt.cycles > 0 ? opt.cycles : cfg.cycling.cycles;
    Experiment ex(cfg);
    TraceResult forming = run_forming(cfg, ex);
    std::optional<double> v_f = detect_forming_voltage(forming, cfg.compliance.i_cc);
    if (!v_f) std::cout << "warning: forming ramp never reached compliance\n";

    CycleResult res = run_cycles(ex.stepper, ex.state, cycle_config(cfg, cycles));

    write_trace_csv(join(cfg.output.directory, "forming_trace.csv"), forming, meta);
    write_cycles_csv(join(cfg.output.directory, "cycles.csv"), res, meta);
    write_trace_csv(join(cfg.output.directory, "cycle_trace.csv"), res.trace, meta);

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("cycles", std::to_string(cycles));
    rows.emplace_back("forming_voltage_V", v_f ? format_double(*v_f) : "none");
    rows.emplace_back("median_r_lrs_ohm", format_double(median(res.r_lrs)));
    rows.emplace_back("median_r_hrs_ohm", format_double(median(res.r_hrs)));
    rows.emplace_back("resistance_ratio", format_double(resistance_ratio(res.r_hrs, res.r_lrs)));
    bool have_spread = cycles >= 2;
    rows.emplace_back("lrs_uniformity", have_spread
                                            ? format_double(uniformity(res.r_lrs, cfg.sample_std))
                                            : std::string("unavailable"));
    rows.emplace_back("hrs_uniformity", have_spread
                                            ? format_double(uniformity(res.r_hrs, cfg.sample_std))
                                            : std::string("unavailable"));
    rows.emplace_back("peak_temperature_K", format_double(res.peak_temperature));
    write_summary(join(cfg.output.directory, "summary.txt"), meta, rows);
    echo_rows(rows);
    return 0;
}

int cmd_sweep(const CliOptions& opt, std::string& diag_dir) {
    RunConfig cfg = make_config(opt);
    auto meta = metadata_for(cfg);
    fs::create_directories(cfg.output.directory);
    diag_dir = cfg.output.directory;

    SweepMap map = run_sweep(cfg, opt.jobs);
    write_sweep_csv(join(cfg.output.directory, "sweep.csv"), map, meta);

    int ok = 0, unformed = 0, failed = 0;
    const SweepCell* best = nullptr;
    for (const auto& cell : map.cells) {
        if (cell.status == "ok") {
            ++ok;
            if (!best || cell.ratio > best->ratio) best = &cell;
        } else if (cell.status == "no-forming") {
            ++unformed;
        } else {
            ++failed;
        }
    }
    int total = static_cast<int>(map.cells.size());
    int completed = ok + unformed;

    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("cells", std::to_string(total));
    rows.emplace_back("completed", std::to_string(completed));
    rows.emplace_back("formed", std::to_string(ok));
    rows.emplace_back("no_forming", std::to_string(unformed));
    rows.emplace_back("failed", std::to_string(failed));
    if (best) {
        rows.emplace_back("best_ratio", format_double(best->ratio));
        rows.emplace_back("best_sigma_slope", format_double(best->sigma_slope));
        rows.emplace_back("best_kth_slope", format_double(best->kth_slope));
    }
    write_summary(join(cfg.output.directory, "sweep_summary.txt"), meta, rows);
    echo_rows(rows);

    bool enough = completed * 10 >= total * 9;
    if (!enough) std::cerr << "sweep: fewer than 90% of cells completed\n";
    return enough ? 0 : 1;
}

int cmd_iv(const CliOptions& opt, std::string& diag_dir) {
    RunConfig cfg = make_config(opt);
    auto meta = metadata_for(cfg);
    fs::create_directories(cfg.output.directory);
    diag_dir = cfg.output.directory;

    Experiment ex(cfg);
    TraceResult up = run_forming(cfg, ex);
    TraceResult back = dc_sweep(ex.stepper, ex.state, cfg.forming.v_stop, 0.0,
                                cfg.forming.duration, cfg.forming.dwell, cfg.forming.dt);
    up.samples.insert(up.samples.end(), back.samples.begin(), back.samples.end());
    up.peak_temperature = std::max(up.peak_temperature, back.peak_temperature);

    write_trace_csv(join(cfg.output.directory, "iv.csv"), up, meta);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("samples", std::to_string(up.samples.size()));
    rows.emplace_back("peak_temperature_K", format_double(up.peak_temperature));
    echo_rows(rows);
    return 0;
}

int cmd_validate() {
    std::vector<CheckResult> checks = run_verification();
    bool all = true;
    for (const auto& c : checks) {
        all = all && c.passed;
        std::printf("%s  %-24s metric=%.3e threshold=%.3e  %s\n", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.metric, c.threshold, c.detail.c_str());
    }
    std::printf("%s\n", all ? "all checks passed" : "verification FAILED");
    return all ? 0 : 1;
}

int cmd_print_config(const CliOptions& opt) {
    std::cout << dump_config(make_config(opt)) << "\n";
    return 0;
}

void write_diagnostics(const std::string& dir, const SolverError& err) {
    if (dir.empty()) return;
    std::ofstream out(join(dir, "diagnostics.txt"), std::ios::binary);
    if (!out) return;
    out << "solver failure\n"
        << "message " << err.what() << "\n"
        << "residual " << format_double(err.residual) << "\n"
        << "iterations " << err.iterations << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume simulator of forming and resistive switching in a "
                 "Pd/Ta2O5/TaOx/Pd stack with a series current-limiting layer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("taoxsim ") + kVersion);

    CliOptions opt;
    CLI::App* form = app.add_subcommand("form", "Forming staircase: trace, snapshots, summary");
    add_common(form, opt);
    CLI::App* cycle = app.add_subcommand("cycle", "Form, then pulsed set/reset cycling");
    add_common(cycle, opt);
    cycle->add_option("--cycles", opt.cycles, "Number of set/reset cycles")
        ->check(CLI::PositiveNumber);
    CLI::App* sweep = app.add_subcommand("sweep", "Map the two conductivity-slope parameters");
    add_common(sweep, opt);
    sweep->add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    CLI::App* iv = app.add_subcommand("iv", "Quasi-static I-V loop: down-sweep and return");
    add_common(iv, opt);
    CLI::App* validate =
        app.add_subcommand("validate", "Analytic and convergence checks of the solvers");
    CLI::App* print_config = app.add_subcommand("print-config", "Effective configuration as JSON");
    add_common(print_config, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string diag_dir;
    try {
        if (form->parsed()) return cmd_form(opt, diag_dir);
        if (cycle->parsed()) return cmd_cycle(opt, diag_dir);
        if (sweep->parsed()) return cmd_sweep(opt, diag_dir);
        if (iv->parsed()) return cmd_iv(opt, diag_dir);
        if (validate->parsed()) return cmd_validate();
        if (print_config->parsed()) return cmd_print_config(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        write_diagnostics(diag_dir, e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
