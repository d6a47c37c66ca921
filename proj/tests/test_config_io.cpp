#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taox/config.hpp"
#include "taox/errors.hpp"
#include "taox/io.hpp"
#include "taox/state.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace taox;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "taox_test_io";
        std::filesystem::create_directories(path);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("default config is valid and exposes the derived fields") {
    RunConfig cfg = default_config();
    CHECK_NOTHROW(cfg.validate());
    // compliance dimensions follow the geometry
    CHECK(cfg.compliance.width == doctest::Approx(cfg.geometry.width));
    CHECK(cfg.compliance.depth == doctest::Approx(cfg.geometry.depth));
    CHECK(cfg.sweep.sigma_slopes.size() == 8);
    CHECK(cfg.sweep.kth_slopes.size() == 8);
}

TEST_CASE("config round-trips through its canonical dump") {
    RunConfig cfg = default_config();
    cfg.seed = 77;
    cfg.cycling.cycles = 7;
    cfg.materials.sigma_slope = 12.5;
    RunConfig back = parse_config(dump_config(cfg));
    CHECK(dump_config(back) == dump_config(cfg));
    CHECK(back.seed == 77);
    CHECK(back.cycling.cycles == 7);
    CHECK(back.materials.sigma_slope == doctest::Approx(12.5));
}

TEST_CASE("config hash is stable and sensitive to every change") {
    RunConfig cfg = default_config();
    std::uint64_t base = config_hash(cfg);
    CHECK(config_hash(cfg) == base);
    cfg.seed += 1;
    CHECK(config_hash(cfg) != base);
    cfg.seed -= 1;
    cfg.forming.dt *= 2.0;
    CHECK(config_hash(cfg) != base);
}

TEST_CASE("parser rejects unknown keys and malformed values") {
    CHECK_THROWS_AS(parse_config("{\"bogus\": 1}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"forming\": {\"dwelll\": 1e-4}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"forming\": {\"dwell\": \"fast\"}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
    // validation failures surface as config errors too
    CHECK_THROWS_AS(parse_config("{\"forming\": {\"dwell\": -1.0}}"), ConfigError);
    CHECK_THROWS_AS(parse_config("{\"cycling\": {\"cycles\": 0}}"), ConfigError);
}

TEST_CASE("comments are allowed in config files") {
    TempDir tmp;
    std::string path = tmp.file("with_comments.json");
    std::ofstream out(path);
    out << "{\n  // staircase settings\n  \"forming\": {\"dwell\": 5e-5}\n}\n";
    out.close();
    RunConfig cfg = load_config(path);
    CHECK(cfg.forming.dwell == doctest::Approx(5e-5));
    CHECK_THROWS_AS(load_config(tmp.file("missing.json")), ConfigError);
}

TEST_CASE("double formatting is shortest-round-trip and reproducible") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_double(-2.1) == "-2.1");
    for (double v : {1e28, 5.75, -1.7834567, 2e-5, 1.0 / 3.0}) {
        double parsed = std::stod(format_double(v));
        CHECK(parsed == v);
    }
}

TEST_CASE("trace tables carry metadata and reproduce byte-for-byte") {
    TraceResult trace;
    for (int i = 0; i < 3; ++i) {
        TraceSample s;
        s.time = 1e-4 * (i + 1);
        s.v1 = -0.7 * (i + 1);
        s.v2 = s.v1 * 0.9;
        s.current = -1e-5 * (i + 1);
        s.t_peak = 300.0 + i;
        s.n_total = 1e12;
        trace.samples.push_back(s);
    }
    TempDir tmp;
    write_trace_csv(tmp.file("a.csv"), trace, {"seed=1", "hash=42"});
    write_trace_csv(tmp.file("b.csv"), trace, {"seed=1", "hash=42"});
    std::string a = slurp(tmp.file("a.csv"));
    CHECK(a == slurp(tmp.file("b.csv")));
    CHECK(a.rfind("# seed=1", 0) == 0);
    // one header row plus one row per sample
    int rows = 0;
    for (char ch : a)
        if (ch == '\n') ++rows;
    CHECK(rows == 2 + 1 + 3);
}

TEST_CASE("sweep table lists cells in long format") {
    SweepMap map;
    map.sigma_slopes = {9.4, 15.0};
    map.kth_slopes = {5.75};
    map.cells.resize(2);
    map.cells[0].sigma_slope = 9.4;
    map.cells[0].kth_slope = 5.75;
    map.cells[0].formed = true;
    map.cells[0].v_f = -1.7;
    map.cells[0].r_hrs = 2e4;
    map.cells[0].r_lrs = 1e3;
    map.cells[0].ratio = 20.0;
    map.cells[0].status = "ok";
    map.cells[1].sigma_slope = 15.0;
    map.cells[1].kth_slope = 5.75;
    map.cells[1].status = "no-forming";

    std::string text = sweep_csv_text(map, {"seed=1"});
    CHECK(text.find("9.4") != std::string::npos);
    CHECK(text.find("no-forming") != std::string::npos);
    int rows = 0;
    for (char ch : text)
        if (ch == '\n') ++rows;
    // metadata, header, two cells
    CHECK(rows == 1 + 1 + 2);
}

TEST_CASE("snapshot writes a legacy vtk grid matching the mesh") {
    RunConfig cfg = default_config();
    Mesh mesh = build_mesh(cfg.geometry, cfg.sweep.resolution);
    FieldState state = initial_state(mesh, cfg.materials);
    TempDir tmp;
    write_snapshot_vtk(tmp.file("snap.vtk"), mesh, state);
    std::string text = slurp(tmp.file("snap.vtk"));
    CHECK(text.rfind("# vtk DataFile Version", 0) == 0);
    CHECK(text.find("RECTILINEAR_GRID") != std::string::npos);
    std::ostringstream dims;
    dims << "DIMENSIONS " << mesh.ny() + 1 << " " << mesh.nz() + 1 << " 2";
    CHECK(text.find(dims.str()) != std::string::npos);
    CHECK(text.find("vacancy_density") != std::string::npos);
    CHECK(text.find("temperature") != std::string::npos);
    CHECK(text.find("potential") != std::string::npos);
}
