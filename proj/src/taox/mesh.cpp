#include "taox/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace taox {

void DeviceGeometry::validate() const {
    if (width <= 0 || depth <= 0)
        throw std::invalid_argument("geometry: width and depth must be positive");
    if (t_bottom_electrode <= 0 || t_reservoir <= 0 || t_switch <= 0 ||
        t_top_electrode <= 0 || t_cml <= 0)
        throw std::invalid_argument("geometry: all layer thicknesses must be positive");
}

void MeshResolution::validate() const {
    if (dy <= 0 || dz <= 0)
        throw std::invalid_argument("mesh: dy and dz must be positive");
    if (dz_switch < 0 || dz_electrode < 0)
        throw std::invalid_argument("mesh: layer spacing overrides must be non-negative");
}

namespace {

int layer_cells(double thickness, double target, int min_cells) {
    int n = static_cast<int>(std::llround(thickness / target));
    return std::max(n, min_cells);
}

void append_layer(std::vector<double>& z_faces, std::vector<Region>& row_regions,
                  double thickness, double target, int min_cells, Region r) {
    int n = layer_cells(thickness, target, min_cells);
    double z0 = z_faces.back();
    for (int i = 1; i <= n; ++i) {
        z_faces.push_back(z0 + thickness * i / n);
        row_regions.push_back(r);
    }
    z_faces.back() = z0 + thickness;  // avoid rounding drift at interfaces
}

} // namespace

Mesh Mesh::device(const DeviceGeometry& geom, const MeshResolution& res) {
    geom.validate();
    res.validate();

    double dz_sw = res.dz_switch > 0 ? res.dz_switch : res.dz;
    double dz_el = res.dz_electrode > 0 ? res.dz_electrode : res.dz;

    Mesh m;
    m.depth_ = geom.depth;

    int ny = std::max(2, static_cast<int>(std::llround(geom.width / res.dy)));
    m.y_faces_.resize(ny + 1);
    for (int i = 0; i <= ny; ++i)
        m.y_faces_[i] = geom.width * i / ny;

    std::vector<Region> row_regions;
    m.z_faces_.push_back(0.0);
    append_layer(m.z_faces_, row_regions, geom.t_bottom_electrode, dz_el, 2, Region::BottomElectrode);
    append_layer(m.z_faces_, row_regions, geom.t_reservoir, res.dz, 2, Region::Reservoir);
    append_layer(m.z_faces_, row_regions, geom.t_switch, dz_sw, 4, Region::Switch);
    append_layer(m.z_faces_, row_regions, geom.t_top_electrode, dz_el, 2, Region::TopElectrode);
    append_layer(m.z_faces_, row_regions, geom.t_cml, dz_el, 2, Region::Cml);

    m.ny_ = ny;
    m.nz_ = static_cast<int>(row_regions.size());
    m.region_.resize(static_cast<std::size_t>(m.ny_) * m.nz_);
    for (int iz = 0; iz < m.nz_; ++iz)
        for (int iy = 0; iy < m.ny_; ++iy)
            m.region_[m.cell(iy, iz)] = row_regions[iz];

    m.interface_z_ = geom.t_bottom_electrode + geom.t_reservoir;
    m.finalize();
    return m;
}

Mesh Mesh::from_faces(std::vector<double> y_faces, std::vector<double> z_faces,
                      std::vector<Region> cell_regions, double depth) {
    if (y_faces.size() < 2 || z_faces.size() < 2)
        throw std::invalid_argument("mesh: need at least one cell per axis");
    for (std::size_t i = 1; i < y_faces.size(); ++i)
        if (y_faces[i] <= y_faces[i - 1])
            throw std::invalid_argument("mesh: y faces must be strictly increasing");
    for (std::size_t i = 1; i < z_faces.size(); ++i)
        if (z_faces[i] <= z_faces[i - 1])
            throw std::invalid_argument("mesh: z faces must be strictly increasing");
    if (depth <= 0)
        throw std::invalid_argument("mesh: depth must be positive");

    Mesh m;
    m.ny_ = static_cast<int>(y_faces.size()) - 1;
    m.nz_ = static_cast<int>(z_faces.size()) - 1;
    if (cell_regions.size() != static_cast<std::size_t>(m.ny_) * m.nz_)
        throw std::invalid_argument("mesh: region tags must cover every cell");
    m.depth_ = depth;
    m.y_faces_ = std::move(y_faces);
    m.z_faces_ = std::move(z_faces);
    m.region_ = std::move(cell_regions);

    // reservoir/switch interface if the stack contains one; otherwise domain bottom
    m.interface_z_ = m.z_faces_.front();
    for (int iz = 1; iz < m.nz_; ++iz) {
        if (m.region_[m.cell(0, iz - 1)] == Region::Reservoir &&
            m.region_[m.cell(0, iz)] == Region::Switch) {
            m.interface_z_ = m.z_faces_[iz];
            break;
        }
    }
    m.finalize();
    return m;
}

void Mesh::finalize() {
    dy_.resize(ny_);
    yc_.resize(ny_);
    for (int iy = 0; iy < ny_; ++iy) {
        dy_[iy] = y_faces_[iy + 1] - y_faces_[iy];
        yc_[iy] = 0.5 * (y_faces_[iy + 1] + y_faces_[iy]);
    }
    dz_.resize(nz_);
    zc_.resize(nz_);
    for (int iz = 0; iz < nz_; ++iz) {
        dz_[iz] = z_faces_[iz + 1] - z_faces_[iz];
        zc_[iz] = 0.5 * (z_faces_[iz + 1] + z_faces_[iz]);
    }

    oxide_index_.assign(cell_count(), -1);
    oxide_cells_.clear();
    for (int c = 0; c < cell_count(); ++c) {
        if (is_oxide(region_[c])) {
            oxide_index_[c] = static_cast<int>(oxide_cells_.size());
            oxide_cells_.push_back(c);
        }
    }
}

double Mesh::domain_volume() const {
    double v = 0.0;
    for (int iz = 0; iz < nz_; ++iz)
        for (int iy = 0; iy < ny_; ++iy)
            v += volume(iy, iz);
    return v;
}

int Mesh::rows_in_region(Region r) const {
    int n = 0;
    for (int iz = 0; iz < nz_; ++iz)
        if (region(0, iz) == r)
            ++n;
    return n;
}

Mesh build_mesh(const DeviceGeometry& geom, const MeshResolution& res) {
    return Mesh::device(geom, res);
}

} // namespace taox
