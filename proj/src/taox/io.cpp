#include "taox/io.hpp"

#include "taox/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace taox {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // no platform newline translation
    if (!out) throw ConfigError("io: cannot open " + path + " for writing");
    return out;
}

void write_metadata(std::ofstream& out, const std::vector<std::string>& metadata) {
    for (const auto& line : metadata) out << "# " << line << "\n";
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return out;
}

} // namespace

void write_trace_csv(const std::string& path, const TraceResult& trace,
                     const std::vector<std::string>& metadata) {
    auto out = open_out(path);
    write_metadata(out, metadata);
    out << "time,v1,v2,current,t_peak,n_total,substeps,outer_iterations\n";
    for (const auto& s : trace.samples) {
        out << format_double(s.time) << ',' << format_double(s.v1) << ',' << format_double(s.v2)
            << ',' << format_double(s.current) << ',' << format_double(s.t_peak) << ','
            << format_double(s.n_total) << ',' << s.substeps << ',' << s.outer_iterations << "\n";
    }
}

void write_cycles_csv(const std::string& path, const CycleResult& cycles,
                      const std::vector<std::string>& metadata) {
    auto out = open_out(path);
    write_metadata(out, metadata);
    out << "cycle,r_lrs,r_hrs\n";
    for (std::size_t i = 0; i < cycles.r_lrs.size(); ++i) {
        out << i + 1 << ',' << format_double(cycles.r_lrs[i]) << ','
            << format_double(i < cycles.r_hrs.size() ? cycles.r_hrs[i] : 0.0) << "\n";
    }
}

std::string sweep_csv_text(const SweepMap& map, const std::vector<std::string>& metadata) {
    std::string out;
    for (const auto& line : metadata) out += "# " + line + "\n";
    out += "sigma_slope,kth_slope,formed,v_f,r_hrs,r_lrs,ratio,hrs_uniformity,lrs_uniformity,"
           "status\n";
    for (std::size_t j = 0; j < map.kth_slopes.size(); ++j) {
        for (std::size_t i = 0; i < map.sigma_slopes.size(); ++i) {
            const SweepCell& c = map.cell(static_cast<int>(i), static_cast<int>(j));
            out += format_double(c.sigma_slope) + ',' + format_double(c.kth_slope) + ',';
            out += c.formed ? "1," : "0,";
            out += format_double(c.v_f) + ',' + format_double(c.r_hrs) + ',' +
                   format_double(c.r_lrs) + ',' + format_double(c.ratio) + ',' +
                   format_double(c.hrs_uniformity) + ',' + format_double(c.lrs_uniformity) + ',' +
                   sanitize(c.status) + "\n";
        }
    }
    return out;
}

void write_sweep_csv(const std::string& path, const SweepMap& map,
                     const std::vector<std::string>& metadata) {
    auto out = open_out(path);
    out << sweep_csv_text(map, metadata);
}

void write_profile_csv(const std::string& path, const std::vector<ProfilePoint>& profile,
                       const std::string& value_name) {
    auto out = open_out(path);
    out << "coordinate," << value_name << "\n";
    for (const auto& p : profile)
        out << format_double(p.coordinate) << ',' << format_double(p.value) << "\n";
}

void write_snapshot_vtk(const std::string& path, const Mesh& mesh, const FieldState& state) {
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\n";
    out << "device cross-section snapshot t=" << format_double(state.time) << "\n";
    out << "ASCII\nDATASET RECTILINEAR_GRID\n";
    out << "DIMENSIONS " << mesh.ny() + 1 << ' ' << mesh.nz() + 1 << " 2\n";
    out << "X_COORDINATES " << mesh.ny() + 1 << " double\n";
    for (double y : mesh.y_faces()) out << format_double(y) << "\n";
    out << "Y_COORDINATES " << mesh.nz() + 1 << " double\n";
    for (double z : mesh.z_faces()) out << format_double(z) << "\n";
    out << "Z_COORDINATES 2 double\n0\n" << format_double(mesh.depth()) << "\n";

    const int n = mesh.cell_count();
    out << "CELL_DATA " << n << "\n";
    auto field = [&](const char* name, const std::vector<double>& values) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (int c = 0; c < n; ++c)
            out << format_double(c < static_cast<int>(values.size()) ? values[c] : 0.0) << "\n";
    };
    field("vacancy_density", state.vacancy_density);
    field("temperature", state.temperature);
    field("potential", state.potential);
    field("field_magnitude", state.field_magnitude);
    out << "SCALARS region int 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < n; ++c) out << static_cast<int>(mesh.region(c)) << "\n";
}

} // namespace taox
