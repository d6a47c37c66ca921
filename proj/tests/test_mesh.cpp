#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "taox/mesh.hpp"
#include "taox/state.hpp"

#include <cmath>

using namespace taox;

TEST_CASE("default stack at 1 nm target spacing") {
    DeviceGeometry geom;
    MeshResolution res;  // 1 nm everywhere
    Mesh m = build_mesh(geom, res);

    CHECK(m.ny() == 40);
    CHECK(m.rows_in_region(Region::BottomElectrode) == 35);
    CHECK(m.rows_in_region(Region::Reservoir) == 30);
    CHECK(m.rows_in_region(Region::Switch) == 5);
    CHECK(m.rows_in_region(Region::TopElectrode) == 50);
    CHECK(m.rows_in_region(Region::Cml) == 10);
    CHECK(m.nz() == 130);

    // cell volumes partition the domain
    CHECK(m.domain_volume() == doctest::Approx(40e-9 * 130e-9 * 20e-9).epsilon(1e-12));

    // the reservoir/switch interface lies exactly on a face
    bool found = false;
    for (double z : m.z_faces())
        if (std::abs(z - m.interface_z()) < 1e-18)
            found = true;
    CHECK(found);
    CHECK(m.interface_z() == doctest::Approx(65e-9));

    // every row is single-region, and regions appear bottom-up in stack order
    Region prev = m.region(0, 0);
    int transitions = 0;
    for (int iz = 0; iz < m.nz(); ++iz) {
        Region r = m.region(0, iz);
        for (int iy = 1; iy < m.ny(); ++iy)
            REQUIRE(m.region(iy, iz) == r);
        if (r != prev) {
            ++transitions;
            CHECK(static_cast<int>(r) == static_cast<int>(prev) + 1);
            prev = r;
        }
    }
    CHECK(transitions == 4);
}

TEST_CASE("construction is deterministic") {
    DeviceGeometry geom;
    MeshResolution res;
    Mesh a = build_mesh(geom, res);
    Mesh b = build_mesh(geom, res);
    REQUIRE(a.ny() == b.ny());
    REQUIRE(a.nz() == b.nz());
    for (std::size_t i = 0; i < a.z_faces().size(); ++i)
        CHECK(a.z_faces()[i] == b.z_faces()[i]);
}

TEST_CASE("layer minimum cell counts survive coarse targets") {
    DeviceGeometry geom;
    MeshResolution res;
    res.dy = 20e-9;
    res.dz = 20e-9;
    Mesh m = build_mesh(geom, res);
    CHECK(m.ny() >= 2);
    CHECK(m.rows_in_region(Region::BottomElectrode) >= 2);
    CHECK(m.rows_in_region(Region::Reservoir) >= 2);
    CHECK(m.rows_in_region(Region::Switch) >= 4);
    CHECK(m.rows_in_region(Region::TopElectrode) >= 2);
    CHECK(m.rows_in_region(Region::Cml) >= 2);
}

TEST_CASE("switch refinement produces the finest rows there") {
    DeviceGeometry geom;
    MeshResolution res;
    res.dz_switch = 0.5e-9;
    res.dz_electrode = 2e-9;
    Mesh m = build_mesh(geom, res);
    CHECK(m.rows_in_region(Region::Switch) == 10);
    double dz_min = 1e9;
    for (int iz = 0; iz < m.nz(); ++iz)
        dz_min = std::min(dz_min, m.dz(iz));
    for (int iz = 0; iz < m.nz(); ++iz)
        if (m.region(0, iz) == Region::Switch)
            CHECK(m.dz(iz) == doctest::Approx(dz_min));
}

TEST_CASE("invalid construction inputs are rejected") {
    DeviceGeometry geom;
    geom.t_switch = 0.0;
    CHECK_THROWS_AS(build_mesh(geom, MeshResolution{}), std::invalid_argument);

    MeshResolution res;
    res.dz = -1e-9;
    CHECK_THROWS_AS(build_mesh(DeviceGeometry{}, res), std::invalid_argument);

    CHECK_THROWS_AS(Mesh::from_faces({0.0, 1.0}, {0.0}, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Mesh::from_faces({0.0, 1.0}, {0.0, -1.0},
                                     {Region::Reservoir}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Mesh::from_faces({0.0, 1.0}, {0.0, 1.0},
                                     {Region::Reservoir}, 0.0), std::invalid_argument);
}

TEST_CASE("initial state fields") {
    MaterialDB db;
    Mesh m = build_mesh(DeviceGeometry{}, MeshResolution{});
    FieldState s = initial_state(m, db);

    for (int c = 0; c < m.cell_count(); ++c) {
        CHECK(s.temperature[c] == 300.0);
        CHECK(s.potential[c] == 0.0);
        switch (m.region(c)) {
            case Region::Reservoir: CHECK(s.vacancy_density[c] == 1e28); break;
            case Region::Switch:    CHECK(s.vacancy_density[c] == 1e22); break;
            default:                CHECK(s.vacancy_density[c] == 0.0); break;
        }
    }
    CHECK(s.time == 0.0);
}

TEST_CASE("total vacancy count of the fresh device") {
    MaterialDB db;
    Mesh m = build_mesh(DeviceGeometry{}, MeshResolution{});
    FieldState s = initial_state(m, db);

    // independent arithmetic: density times layer slab volume
    double expected_reservoir = 1e28 * (40e-9 * 30e-9 * 20e-9);
    double expected_switch = 1e22 * (40e-9 * 5e-9 * 20e-9);
    CHECK(total_vacancies(s, m) ==
          doctest::Approx(expected_reservoir + expected_switch).epsilon(1e-9));
    CHECK(total_vacancies(s, m) == doctest::Approx(2.4e5).epsilon(1e-4));
    // the reservoir holds nearly all of it
    CHECK(expected_reservoir / expected_switch == doctest::Approx(6.0e6));
}

TEST_CASE("nucleation seed adds a centred symmetric bump") {
    MaterialDB db;
    Mesh m = build_mesh(DeviceGeometry{}, MeshResolution{});
    FieldState s = initial_state(m, db);
    double before = total_vacancies(s, m);

    NucleationSeed off;
    off.enabled = false;
    FieldState s2 = s;
    apply_nucleation_seed(s2, m, db, off);
    CHECK(total_vacancies(s2, m) == before);

    NucleationSeed seed;
    apply_nucleation_seed(s, m, db, seed);
    CHECK(total_vacancies(s, m) > before);

    // mirror symmetry about the centre line
    for (int iz = 0; iz < m.nz(); ++iz)
        for (int iy = 0; iy < m.ny() / 2; ++iy) {
            int left = m.cell(iy, iz);
            int right = m.cell(m.ny() - 1 - iy, iz);
            CHECK(s.vacancy_density[left] == doctest::Approx(s.vacancy_density[right]));
        }

    // peak sits in the oxide next to the interface, at the centre columns
    int peak_cell = 0;
    double peak = -1.0;
    for (int c : m.oxide_cells())
        if (s.vacancy_density[c] > peak) {
            peak = s.vacancy_density[c];
            peak_cell = c;
        }
    int iy = peak_cell % m.ny();
    int iz = peak_cell / m.ny();
    CHECK(std::abs(m.yc(iy) - m.center_y()) < 1.1e-9);
    CHECK(std::abs(m.zc(iz) - m.interface_z()) < 1.1e-9);

    // electrodes stay vacancy-free
    for (int c = 0; c < m.cell_count(); ++c)
        if (!is_oxide(m.region(c)))
            CHECK(s.vacancy_density[c] == 0.0);
}
