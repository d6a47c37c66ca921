#include "taox/config.hpp"

#include "taox/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace taox {

using nlohmann::json;

void RunConfig::validate() const {
    try {
        geometry.validate();
        resolution.validate();
        materials.validate();
        compliance.validate();
        solver.validate();
        sweep.resolution.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(forming.duration > 0.0) || !(forming.dwell > 0.0) || forming.dwell > forming.duration)
        throw ConfigError("config: forming dwell must be in (0, duration]");
    if (!(forming.dt > 0.0) || forming.dt > forming.dwell)
        throw ConfigError("config: forming dt must be in (0, dwell]");
    if (!std::isfinite(forming.v_stop))
        throw ConfigError("config: forming ramp end must be finite");
    if (cycling.cycles < 1 || sweep.cycles < 1)
        throw ConfigError("config: cycle counts must be >= 1");
    if (!(cycling.set_duration > 0.0) || !(cycling.reset_duration > 0.0) ||
        !(cycling.dt > 0.0) || !(sweep.dt > 0.0) || !(sweep.dwell > 0.0))
        throw ConfigError("config: durations and steps must be positive");
    if (cycling.read_bias == 0.0)
        throw ConfigError("config: read bias must be nonzero");
    if (cycling.noise_sigma < 0.0)
        throw ConfigError("config: noise sigma must be non-negative");
    if (sweep.sigma_slopes.empty() || sweep.kth_slopes.empty())
        throw ConfigError("config: sweep axes must be non-empty");
    for (double v : sweep.sigma_slopes)
        if (!(v > 0.0)) throw ConfigError("config: sweep sigma_slopes must be positive");
    for (double v : sweep.kth_slopes)
        if (!(v > 0.0)) throw ConfigError("config: sweep kth_slopes must be positive");
    if (output.snapshot_every < 0)
        throw ConfigError("config: snapshot_every must be >= 0");
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

void sync_derived(RunConfig& cfg) {
    cfg.compliance.width = cfg.geometry.width;
    cfg.compliance.depth = cfg.geometry.depth;
    cfg.compliance.thickness = cfg.geometry.t_cml;
    cfg.compliance.sigma_base = cfg.materials.cml_sigma_base;
    if (cfg.sweep.sigma_slopes.empty()) cfg.sweep.sigma_slopes = linspace(6.2, 18.8, 8);
    if (cfg.sweep.kth_slopes.empty()) cfg.sweep.kth_slopes = linspace(2.5, 11.5, 8);
}

void reject_unknown(const json& j, const char* section,
                    std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool found = false;
        for (const char* k : known)
            if (it.key() == k) {
                found = true;
                break;
            }
        if (!found)
            throw ConfigError(std::string("config: unknown key \"") + it.key() + "\" in " +
                              section);
    }
}

template <typename T>
void get_to_if(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            it->get_to(out);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config: bad value for \"") + key + "\": " + e.what());
        }
    }
}

void parse_geometry(const json& j, DeviceGeometry& g) {
    reject_unknown(j, "geometry",
                   {"width", "depth", "t_bottom_electrode", "t_reservoir", "t_switch",
                    "t_top_electrode", "t_cml"});
    get_to_if(j, "width", g.width);
    get_to_if(j, "depth", g.depth);
    get_to_if(j, "t_bottom_electrode", g.t_bottom_electrode);
    get_to_if(j, "t_reservoir", g.t_reservoir);
    get_to_if(j, "t_switch", g.t_switch);
    get_to_if(j, "t_top_electrode", g.t_top_electrode);
    get_to_if(j, "t_cml", g.t_cml);
}

void parse_resolution(const json& j, const char* section, MeshResolution& r) {
    reject_unknown(j, section, {"dy", "dz", "dz_switch", "dz_electrode"});
    get_to_if(j, "dy", r.dy);
    get_to_if(j, "dz", r.dz);
    get_to_if(j, "dz_switch", r.dz_switch);
    get_to_if(j, "dz_electrode", r.dz_electrode);
}

void parse_materials(const json& j, MaterialDB& m) {
    reject_unknown(
        j, "materials",
        {"hop_distance",        "attempt_frequency",    "migration_barrier",
         "sigma_slope",         "sigma_prefactor_floor", "conduction_barrier_metallic",
         "conduction_barrier_insulating", "density_saturation", "density_pinning",
         "pf_field_coefficient", "pf_offset",           "kth_slope",
         "kth_floor",           "kth_temp_coefficient", "reference_temperature",
         "pd_sigma",            "pd_kth",               "pd_density",
         "pd_heat_capacity",    "oxide_density",        "oxide_heat_capacity",
         "cml_sigma_base",      "ambient_temperature",  "initial_density_reservoir",
         "initial_density_switch", "sinh_clamp"});
    get_to_if(j, "hop_distance", m.hop_distance);
    get_to_if(j, "attempt_frequency", m.attempt_frequency);
    get_to_if(j, "migration_barrier", m.migration_barrier);
    get_to_if(j, "sigma_slope", m.sigma_slope);
    get_to_if(j, "sigma_prefactor_floor", m.sigma_prefactor_floor);
    get_to_if(j, "conduction_barrier_metallic", m.conduction_barrier_metallic);
    get_to_if(j, "conduction_barrier_insulating", m.conduction_barrier_insulating);
    get_to_if(j, "density_saturation", m.density_saturation);
    get_to_if(j, "density_pinning", m.density_pinning);
    get_to_if(j, "pf_field_coefficient", m.pf_field_coefficient);
    get_to_if(j, "pf_offset", m.pf_offset);
    get_to_if(j, "kth_slope", m.kth_slope);
    get_to_if(j, "kth_floor", m.kth_floor);
    get_to_if(j, "kth_temp_coefficient", m.kth_temp_coefficient);
    get_to_if(j, "reference_temperature", m.reference_temperature);
    get_to_if(j, "pd_sigma", m.pd_sigma);
    get_to_if(j, "pd_kth", m.pd_kth);
    get_to_if(j, "pd_density", m.pd_density);
    get_to_if(j, "pd_heat_capacity", m.pd_heat_capacity);
    get_to_if(j, "oxide_density", m.oxide_density);
    get_to_if(j, "oxide_heat_capacity", m.oxide_heat_capacity);
    get_to_if(j, "cml_sigma_base", m.cml_sigma_base);
    get_to_if(j, "ambient_temperature", m.ambient_temperature);
    get_to_if(j, "initial_density_reservoir", m.initial_density_reservoir);
    get_to_if(j, "initial_density_switch", m.initial_density_switch);
    get_to_if(j, "sinh_clamp", m.sinh_clamp);
}

void parse_solver(const json& j, SolverConfig& s) {
    reject_unknown(j, "solver",
                   {"dt", "outer_tol", "outer_max_iters", "damping", "linear_tol",
                    "max_step_halvings", "picard_tol", "picard_max_iters", "limit_current",
                    "freeze_transport"});
    get_to_if(j, "dt", s.dt);
    get_to_if(j, "outer_tol", s.outer_tol);
    get_to_if(j, "outer_max_iters", s.outer_max_iters);
    get_to_if(j, "damping", s.damping);
    get_to_if(j, "linear_tol", s.linear_tol);
    get_to_if(j, "max_step_halvings", s.max_step_halvings);
    get_to_if(j, "picard_tol", s.picard_tol);
    get_to_if(j, "picard_max_iters", s.picard_max_iters);
    get_to_if(j, "limit_current", s.limit_current);
    get_to_if(j, "freeze_transport", s.freeze_transport);
}

} // namespace

RunConfig default_config() {
    RunConfig cfg;
    sync_derived(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: parse failure: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(j, "top level",
                   {"geometry", "resolution", "materials", "compliance", "solver", "nucleation",
                    "forming", "cycling", "sweep", "output", "seed", "sample_std"});

    RunConfig cfg;
    if (j.contains("geometry")) parse_geometry(j["geometry"], cfg.geometry);
    if (j.contains("resolution")) parse_resolution(j["resolution"], "resolution", cfg.resolution);
    if (j.contains("materials")) parse_materials(j["materials"], cfg.materials);
    if (j.contains("compliance")) {
        const json& c = j["compliance"];
        reject_unknown(c, "compliance", {"i_cc"});
        get_to_if(c, "i_cc", cfg.compliance.i_cc);
    }
    if (j.contains("solver")) parse_solver(j["solver"], cfg.solver);
    if (j.contains("nucleation")) {
        const json& c = j["nucleation"];
        reject_unknown(c, "nucleation", {"enabled", "relative_amplitude", "width"});
        get_to_if(c, "enabled", cfg.nucleation.enabled);
        get_to_if(c, "relative_amplitude", cfg.nucleation.relative_amplitude);
        get_to_if(c, "width", cfg.nucleation.width);
    }
    if (j.contains("forming")) {
        const json& c = j["forming"];
        reject_unknown(c, "forming", {"v_stop", "duration", "dwell", "dt"});
        get_to_if(c, "v_stop", cfg.forming.v_stop);
        get_to_if(c, "duration", cfg.forming.duration);
        get_to_if(c, "dwell", cfg.forming.dwell);
        get_to_if(c, "dt", cfg.forming.dt);
    }
    if (j.contains("cycling")) {
        const json& c = j["cycling"];
        reject_unknown(c, "cycling",
                       {"cycles", "set_amplitude", "set_duration", "reset_amplitude",
                        "reset_duration", "dt", "read_bias", "noise_sigma"});
        get_to_if(c, "cycles", cfg.cycling.cycles);
        get_to_if(c, "set_amplitude", cfg.cycling.set_amplitude);
        get_to_if(c, "set_duration", cfg.cycling.set_duration);
        get_to_if(c, "reset_amplitude", cfg.cycling.reset_amplitude);
        get_to_if(c, "reset_duration", cfg.cycling.reset_duration);
        get_to_if(c, "dt", cfg.cycling.dt);
        get_to_if(c, "read_bias", cfg.cycling.read_bias);
        get_to_if(c, "noise_sigma", cfg.cycling.noise_sigma);
    }
    if (j.contains("sweep")) {
        const json& c = j["sweep"];
        reject_unknown(c, "sweep",
                       {"sigma_slopes", "kth_slopes", "cycles", "resolution", "dt", "dwell"});
        get_to_if(c, "sigma_slopes", cfg.sweep.sigma_slopes);
        get_to_if(c, "kth_slopes", cfg.sweep.kth_slopes);
        get_to_if(c, "cycles", cfg.sweep.cycles);
        if (c.contains("resolution"))
            parse_resolution(c["resolution"], "sweep.resolution", cfg.sweep.resolution);
        get_to_if(c, "dt", cfg.sweep.dt);
        get_to_if(c, "dwell", cfg.sweep.dwell);
    }
    if (j.contains("output")) {
        const json& c = j["output"];
        reject_unknown(c, "output", {"directory", "snapshot_every"});
        get_to_if(c, "directory", cfg.output.directory);
        get_to_if(c, "snapshot_every", cfg.output.snapshot_every);
    }
    get_to_if(j, "seed", cfg.seed);
    get_to_if(j, "sample_std", cfg.sample_std);

    sync_derived(cfg);
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& cfg) {
    json j;
    j["geometry"] = {{"width", cfg.geometry.width},
                     {"depth", cfg.geometry.depth},
                     {"t_bottom_electrode", cfg.geometry.t_bottom_electrode},
                     {"t_reservoir", cfg.geometry.t_reservoir},
                     {"t_switch", cfg.geometry.t_switch},
                     {"t_top_electrode", cfg.geometry.t_top_electrode},
                     {"t_cml", cfg.geometry.t_cml}};
    j["resolution"] = {{"dy", cfg.resolution.dy},
                       {"dz", cfg.resolution.dz},
                       {"dz_switch", cfg.resolution.dz_switch},
                       {"dz_electrode", cfg.resolution.dz_electrode}};
    const MaterialDB& m = cfg.materials;
    j["materials"] = {{"hop_distance", m.hop_distance},
                      {"attempt_frequency", m.attempt_frequency},
                      {"migration_barrier", m.migration_barrier},
                      {"sigma_slope", m.sigma_slope},
                      {"sigma_prefactor_floor", m.sigma_prefactor_floor},
                      {"conduction_barrier_metallic", m.conduction_barrier_metallic},
                      {"conduction_barrier_insulating", m.conduction_barrier_insulating},
                      {"density_saturation", m.density_saturation},
                      {"density_pinning", m.density_pinning},
                      {"pf_field_coefficient", m.pf_field_coefficient},
                      {"pf_offset", m.pf_offset},
                      {"kth_slope", m.kth_slope},
                      {"kth_floor", m.kth_floor},
                      {"kth_temp_coefficient", m.kth_temp_coefficient},
                      {"reference_temperature", m.reference_temperature},
                      {"pd_sigma", m.pd_sigma},
                      {"pd_kth", m.pd_kth},
                      {"pd_density", m.pd_density},
                      {"pd_heat_capacity", m.pd_heat_capacity},
                      {"oxide_density", m.oxide_density},
                      {"oxide_heat_capacity", m.oxide_heat_capacity},
                      {"cml_sigma_base", m.cml_sigma_base},
                      {"ambient_temperature", m.ambient_temperature},
                      {"initial_density_reservoir", m.initial_density_reservoir},
                      {"initial_density_switch", m.initial_density_switch},
                      {"sinh_clamp", m.sinh_clamp}};
    j["compliance"] = {{"i_cc", cfg.compliance.i_cc}};
    const SolverConfig& s = cfg.solver;
    j["solver"] = {{"dt", s.dt},
                   {"outer_tol", s.outer_tol},
                   {"outer_max_iters", s.outer_max_iters},
                   {"damping", s.damping},
                   {"linear_tol", s.linear_tol},
                   {"max_step_halvings", s.max_step_halvings},
                   {"picard_tol", s.picard_tol},
                   {"picard_max_iters", s.picard_max_iters},
                   {"limit_current", s.limit_current},
                   {"freeze_transport", s.freeze_transport}};
    j["nucleation"] = {{"enabled", cfg.nucleation.enabled},
                       {"relative_amplitude", cfg.nucleation.relative_amplitude},
                       {"width", cfg.nucleation.width}};
    j["forming"] = {{"v_stop", cfg.forming.v_stop},
                    {"duration", cfg.forming.duration},
                    {"dwell", cfg.forming.dwell},
                    {"dt", cfg.forming.dt}};
    j["cycling"] = {{"cycles", cfg.cycling.cycles},
                    {"set_amplitude", cfg.cycling.set_amplitude},
                    {"set_duration", cfg.cycling.set_duration},
                    {"reset_amplitude", cfg.cycling.reset_amplitude},
                    {"reset_duration", cfg.cycling.reset_duration},
                    {"dt", cfg.cycling.dt},
                    {"read_bias", cfg.cycling.read_bias},
                    {"noise_sigma", cfg.cycling.noise_sigma}};
    j["sweep"] = {{"sigma_slopes", cfg.sweep.sigma_slopes},
                  {"kth_slopes", cfg.sweep.kth_slopes},
                  {"cycles", cfg.sweep.cycles},
                  {"resolution",
                   {{"dy", cfg.sweep.resolution.dy},
                    {"dz", cfg.sweep.resolution.dz},
                    {"dz_switch", cfg.sweep.resolution.dz_switch},
                    {"dz_electrode", cfg.sweep.resolution.dz_electrode}}},
                  {"dt", cfg.sweep.dt},
                  {"dwell", cfg.sweep.dwell}};
    j["output"] = {{"directory", cfg.output.directory},
                   {"snapshot_every", cfg.output.snapshot_every}};
    j["seed"] = cfg.seed;
    j["sample_std"] = cfg.sample_std;
    return j.dump(2);
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::string text = dump_config(cfg);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace taox
