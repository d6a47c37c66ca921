#pragma once

#include <cstdint>
#include <vector>

namespace taox {

enum class Region : std::uint8_t {
    BottomElectrode = 0,
    Reservoir,
    Switch,
    TopElectrode,
    Cml,
};

inline bool is_oxide(Region r) { return r == Region::Reservoir || r == Region::Switch; }
inline bool is_electrode(Region r) { return r == Region::BottomElectrode || r == Region::TopElectrode; }

/// Layer stack of the simulated cross-section, bottom to top. Lengths in metres.
/// depth is the out-of-plane extrusion used to convert to volumes and currents.
struct DeviceGeometry {
    double width      = 40e-9;
    double depth      = 20e-9;
    double t_bottom_electrode = 35e-9;
    double t_reservoir        = 30e-9;
    double t_switch           = 5e-9;
    double t_top_electrode    = 50e-9;
    double t_cml              = 10e-9;

    double total_height() const {
        return t_bottom_electrode + t_reservoir + t_switch + t_top_electrode + t_cml;
    }
    void validate() const;  // throws std::invalid_argument
};

/// Target cell spacings. Zero means "inherit dz". The switch layer may be
/// refined independently since that is where the filament dynamics live;
/// the metal layers may be coarsened since their fields are nearly uniform.
struct MeshResolution {
    double dy = 1e-9;
    double dz = 1e-9;
    double dz_switch    = 0.0;
    double dz_electrode = 0.0;

    void validate() const;  // throws std::invalid_argument
};

/**
 * Structured rectilinear cell-centred mesh of the (y, z) cross-section.
 * y is uniform across the width, z spacing is uniform within each layer.
 * Cells are indexed row-major: cell(iy, iz) = iz * ny + iy.
 */
class Mesh {
public:
    static Mesh device(const DeviceGeometry& geom, const MeshResolution& res);

    /// Assemble a mesh from explicit face coordinates; used by the solver
    /// verification problems, which are not device stacks.
    static Mesh from_faces(std::vector<double> y_faces, std::vector<double> z_faces,
                           std::vector<Region> cell_regions, double depth);

    int ny() const { return ny_; }
    int nz() const { return nz_; }
    int cell_count() const { return ny_ * nz_; }
    int cell(int iy, int iz) const { return iz * ny_ + iy; }

    double depth() const { return depth_; }
    double width() const { return y_faces_.back() - y_faces_.front(); }
    double height() const { return z_faces_.back() - z_faces_.front(); }

    const std::vector<double>& y_faces() const { return y_faces_; }
    const std::vector<double>& z_faces() const { return z_faces_; }
    double dy(int iy) const { return dy_[iy]; }
    double dz(int iz) const { return dz_[iz]; }
    double yc(int iy) const { return yc_[iy]; }
    double zc(int iz) const { return zc_[iz]; }

    Region region(int c) const { return region_[c]; }
    Region region(int iy, int iz) const { return region_[cell(iy, iz)]; }
    const std::vector<Region>& regions() const { return region_; }

    double volume(int iy, int iz) const { return dy_[iy] * dz_[iz] * depth_; }
    double domain_volume() const;

    /// Cells carrying mobile vacancies, in ascending cell order.
    const std::vector<int>& oxide_cells() const { return oxide_cells_; }
    /// Position of a cell in oxide_cells(), or -1 for non-oxide cells.
    int oxide_index(int c) const { return oxide_index_[c]; }

    /// z of the reservoir/switch interface; device profiles use it as origin.
    double interface_z() const { return interface_z_; }
    /// y of the device centre line.
    double center_y() const { return 0.5 * (y_faces_.front() + y_faces_.back()); }

    /// Number of cell rows with the given region tag.
    int rows_in_region(Region r) const;

private:
    Mesh() = default;
    void finalize();

    int ny_ = 0, nz_ = 0;
    double depth_ = 0.0;
    double interface_z_ = 0.0;
    std::vector<double> y_faces_, z_faces_;
    std::vector<double> dy_, dz_, yc_, zc_;
    std::vector<Region> region_;
    std::vector<int> oxide_cells_;
    std::vector<int> oxide_index_;
};

/// Standard construction path for the device stack.
Mesh build_mesh(const DeviceGeometry& geom, const MeshResolution& res);

} // namespace taox
