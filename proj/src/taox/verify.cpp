#include "taox/verify.hpp"

#include "taox/coupled.hpp"
#include "taox/diffusion.hpp"
#include "taox/transport.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace taox {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mesh uniform_box(double width, double height, int ny, int nz, Region r, double depth) {
    std::vector<double> yf(ny + 1), zf(nz + 1);
    for (int i = 0; i <= ny; ++i) yf[i] = width * i / ny;
    for (int i = 0; i <= nz; ++i) zf[i] = height * i / nz;
    return Mesh::from_faces(std::move(yf), std::move(zf),
                            std::vector<Region>(static_cast<std::size_t>(ny) * nz, r), depth);
}

double l2_error(const Mesh& mesh, const std::vector<double>& num,
                const std::function<double(double, double)>& exact) {
    double ss = 0.0, vol = 0.0;
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy) {
            double d = num[mesh.cell(iy, iz)] - exact(mesh.yc(iy), mesh.zc(iz));
            double v = mesh.volume(iy, iz);
            ss += d * d * v;
            vol += v;
        }
    return std::sqrt(ss / vol);
}

std::string describe_orders(const std::vector<double>& errors) {
    std::ostringstream ss;
    ss << "errors";
    for (double e : errors) ss << ' ' << e;
    ss << ", orders";
    for (std::size_t i = 1; i < errors.size(); ++i)
        ss << ' ' << std::log2(errors[i - 1] / errors[i]);
    return ss.str();
}

double min_order(const std::vector<double>& errors) {
    double m = 1e30;
    for (std::size_t i = 1; i < errors.size(); ++i)
        m = std::min(m, std::log2(errors[i - 1] / errors[i]));
    return m;
}

} // namespace

CheckResult check_laplace_uniform() {
    const double width = 40e-9, height = 130e-9, depth = 20e-9;
    const double sigma = 250.0, v1 = 1.0;
    Mesh mesh = uniform_box(width, height, 4, 65, Region::Reservoir, depth);
    DiffusionSolver solver(mesh);
    auto sol = solver.solve(std::vector<double>(mesh.cell_count(), sigma), nullptr, nullptr, 0.0,
                            v1, 0.0, 1e-12);

    double psi_err = 0.0;
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy)
            psi_err = std::max(psi_err,
                               std::abs(sol.value[mesh.cell(iy, iz)] - v1 * mesh.zc(iz) / height));
    double i_exact = sigma * width * depth / height * v1;
    double i_err = std::abs(sol.flux_bottom - i_exact) / i_exact;
    double balance = std::abs(sol.flux_top - sol.flux_bottom) / i_exact;

    CheckResult r;
    r.name = "laplace-uniform";
    r.metric = std::max({psi_err, i_err, balance});
    r.threshold = 1e-8;
    r.passed = r.metric <= r.threshold;
    std::ostringstream ss;
    ss << "potential err " << psi_err << ", current err " << i_err << ", balance " << balance;
    r.detail = ss.str();
    return r;
}

CheckResult check_series_stack() {
    const double width = 40e-9, depth = 20e-9;
    const double l1 = 50e-9, l2 = 80e-9;
    const double sigma1 = 120.0, sigma2 = 3.7e4, v1 = 1.0;
    const int n1 = 25, n2 = 40;

    std::vector<double> zf;
    for (int i = 0; i <= n1; ++i) zf.push_back(l1 * i / n1);
    for (int i = 1; i <= n2; ++i) zf.push_back(l1 + l2 * i / n2);
    int nz = static_cast<int>(zf.size()) - 1;
    Mesh mesh = Mesh::from_faces({0.0, 20e-9, 40e-9}, std::move(zf),
                                 std::vector<Region>(static_cast<std::size_t>(2) * nz,
                                                     Region::Reservoir),
                                 depth);

    std::vector<double> kappa(mesh.cell_count());
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy)
            kappa[mesh.cell(iy, iz)] = mesh.zc(iz) < l1 ? sigma1 : sigma2;

    DiffusionSolver solver(mesh);
    auto sol = solver.solve(kappa, nullptr, nullptr, 0.0, v1, 0.0, 1e-12);

    double r_series = (l1 / sigma1 + l2 / sigma2) / (width * depth);
    double i_exact = v1 / r_series;
    double i_err = std::abs(sol.flux_bottom - i_exact) / i_exact;

    CheckResult r;
    r.name = "series-stack";
    r.metric = i_err;
    r.threshold = 1e-3;
    r.passed = r.metric <= r.threshold;
    std::ostringstream ss;
    ss << "current " << sol.flux_bottom << " vs " << i_exact << " (rel err " << i_err << ")";
    r.detail = ss.str();
    return r;
}

CheckResult check_heat_slab() {
    const double width = 40e-9, length = 64e-9, depth = 20e-9;
    const double k = 1.2, q = 5e15, t0 = 300.0;
    Mesh mesh = uniform_box(width, length, 2, 65, Region::Reservoir, depth);

    std::vector<double> kappa(mesh.cell_count(), k);
    std::vector<double> rhs(mesh.cell_count());
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy)
            rhs[mesh.cell(iy, iz)] = q * mesh.volume(iy, iz);

    DiffusionSolver solver(mesh);
    auto sol = solver.solve(kappa, nullptr, &rhs, t0, t0, 0.0, 1e-12);

    double t_max = 0.0;
    for (double t : sol.value) t_max = std::max(t_max, t);
    double dt_exact = q * length * length / (8.0 * k);
    double err = std::abs(t_max - (t0 + dt_exact)) / dt_exact;

    CheckResult r;
    r.name = "heat-slab";
    r.metric = err;
    r.threshold = 0.01;
    r.passed = r.metric <= r.threshold;
    std::ostringstream ss;
    ss << "peak rise " << t_max - t0 << " K vs " << dt_exact << " K (rel err " << err << ")";
    r.detail = ss.str();
    return r;
}

CheckResult check_gaussian_diffusion() {
    const double l = 1.0, d0 = 0.002, t_start = 2.0, t_end = 5.0;
    const int nz = 100, steps = 150;
    auto dens_exact = [&](double z, double t) {
        double var = 2.0 * d0 * t;
        double dz = z - 0.5 * l;
        return std::exp(-0.5 * dz * dz / var) / std::sqrt(2.0 * kPi * var);
    };

    Mesh mesh = uniform_box(0.5, l, 2, nz, Region::Reservoir, 1.0);
    MaterialDB db;
    TransportSolver solver(mesh, db);

    TransportCoefficients co;
    co.diff_y.assign(static_cast<std::size_t>(mesh.ny() + 1) * mesh.nz(), d0);
    co.vel_y.assign(co.diff_y.size(), 0.0);
    co.diff_z.assign(static_cast<std::size_t>(mesh.ny()) * (mesh.nz() + 1), d0);
    co.vel_z.assign(co.diff_z.size(), 0.0);

    std::vector<double> dens(mesh.cell_count());
    for (int iz = 0; iz < mesh.nz(); ++iz)
        for (int iy = 0; iy < mesh.ny(); ++iy)
            dens[mesh.cell(iy, iz)] = dens_exact(mesh.zc(iz), t_start);

    double dt = (t_end - t_start) / steps;
    for (int s = 0; s < steps; ++s) {
        auto out = solver.step_with_coefficients(dens, co, dt);
        dens = std::move(out.density);
    }

    double err = l2_error(mesh, dens, [&](double, double z) { return dens_exact(z, t_end); });
    double peak = dens_exact(0.5 * l, t_end);

    CheckResult r;
    r.name = "gaussian-diffusion";
    r.metric = err / peak;
    r.threshold = 0.05;
    r.passed = r.metric <= r.threshold;
    std::ostringstream ss;
    ss << "relative L2 error " << r.metric << " after spreading from sigma "
       << std::sqrt(2.0 * d0 * t_start) << " to " << std::sqrt(2.0 * d0 * t_end);
    r.detail = ss.str();
    return r;
}

CheckResult check_zero_drive_conservation(int steps) {
    Mesh mesh = build_mesh(DeviceGeometry{}, MeshResolution{});
    MaterialDB db;
    FieldState state = initial_state(mesh, db);
    apply_nucleation_seed(state, mesh, db, NucleationSeed{});
    SolverConfig cfg;
    ComplianceConfig compliance;
    CoupledStepper stepper(mesh, db, compliance, cfg);

    double n_ref = total_vacancies(state, mesh);
    double n_prev = n_ref;
    double max_drift = 0.0, min_density = 0.0, max_current = 0.0, t_dev = 0.0;
    for (int s = 0; s < steps; ++s) {
        StepReport rep = stepper.advance(state, 0.0, cfg.dt);
        double n_now = total_vacancies(state, mesh);
        max_drift = std::max(max_drift, std::abs(n_now - n_prev) / n_ref);
        n_prev = n_now;
        for (int c : mesh.oxide_cells())
            min_density = std::min(min_density, state.vacancy_density[c]);
        max_current = std::max(max_current, std::abs(rep.terminal_current));
        for (double t : state.temperature)
            t_dev = std::max(t_dev, std::abs(t - db.ambient_temperature));
    }

    CheckResult r;
    r.name = "zero-drive-conservation";
    r.metric = max_drift;
    r.threshold = 1e-8;
    r.passed = max_drift <= r.threshold && min_density >= 0.0 && t_dev < 1e-6 &&
               max_current < 1e-15;
    std::ostringstream ss;
    ss << steps << " steps, worst per-step drift " << max_drift << ", min density " << min_density
       << ", max |I| " << max_current << ", max |T - ambient| " << t_dev;
    r.detail = ss.str();
    return r;
}

CheckResult check_potential_mms_order() {
    const double w = 1.0, l = 1.0;
    auto psi_exact = [&](double y, double z) {
        return z / l + 0.3 * std::sin(kPi * z / l) * std::cos(kPi * y / w);
    };
    auto sigma_of = [&](double y, double z) {
        return 1.0 + 0.5 * std::sin(kPi * y / w) * std::sin(kPi * z / l);
    };
    auto source = [&](double y, double z) {
        double sy = std::sin(kPi * y / w), cy = std::cos(kPi * y / w);
        double sz = std::sin(kPi * z / l), cz = std::cos(kPi * z / l);
        double sigma = 1.0 + 0.5 * sy * sz;
        double sigma_y = 0.5 * (kPi / w) * cy * sz;
        double sigma_z = 0.5 * (kPi / l) * sy * cz;
        double psi_y = -0.3 * (kPi / w) * sz * sy;
        double psi_z = 1.0 / l + 0.3 * (kPi / l) * cz * cy;
        double psi_yy = -0.3 * (kPi / w) * (kPi / w) * sz * cy;
        double psi_zz = -0.3 * (kPi / l) * (kPi / l) * sz * cy;
        return -(sigma * (psi_yy + psi_zz) + sigma_y * psi_y + sigma_z * psi_z);
    };

    std::vector<double> errors;
    for (int n : {10, 20, 40}) {
        Mesh mesh = uniform_box(w, l, n, n, Region::Reservoir, 1.0);
        std::vector<double> kappa(mesh.cell_count()), rhs(mesh.cell_count());
        for (int iz = 0; iz < mesh.nz(); ++iz)
            for (int iy = 0; iy < mesh.ny(); ++iy) {
                int c = mesh.cell(iy, iz);
                kappa[c] = sigma_of(mesh.yc(iy), mesh.zc(iz));
                rhs[c] = source(mesh.yc(iy), mesh.zc(iz)) * mesh.volume(iy, iz);
            }
        DiffusionSolver solver(mesh);
        auto sol = solver.solve(kappa, nullptr, &rhs, 0.0, 1.0, 0.0, 1e-12);
        errors.push_back(l2_error(mesh, sol.value, psi_exact));
    }

    CheckResult r;
    r.name = "potential-mms-order";
    r.metric = min_order(errors);
    r.threshold = 1.9;
    r.passed = r.metric >= r.threshold;
    r.detail = describe_orders(errors);
    return r;
}

CheckResult check_heat_mms_order() {
    const double w = 1.0, l = 1.0, rho_cp = 1.0, tau = 0.1, t_final = 0.1;
    auto temp_exact = [&](double y, double z, double t) {
        return 300.0 + 50.0 * std::exp(-t / tau) * std::sin(kPi * z / l) * std::cos(kPi * y / w);
    };
    auto k_of = [&](double y, double z) {
        return 1.0 + 0.5 * std::sin(kPi * y / w) * std::sin(kPi * z / l);
    };
    auto source = [&](double y, double z, double t) {
        double sy = std::sin(kPi * y / w), cy = std::cos(kPi * y / w);
        double sz = std::sin(kPi * z / l), cz = std::cos(kPi * z / l);
        double amp = 50.0 * std::exp(-t / tau);
        double dtdt = -amp / tau * sz * cy;
        double k = 1.0 + 0.5 * sy * sz;
        double k_y = 0.5 * (kPi / w) * cy * sz;
        double k_z = 0.5 * (kPi / l) * sy * cz;
        double t_y = -amp * (kPi / w) * sz * sy;
        double t_z = amp * (kPi / l) * cz * cy;
        double t_yy = -amp * (kPi / w) * (kPi / w) * sz * cy;
        double t_zz = -amp * (kPi / l) * (kPi / l) * sz * cy;
        return rho_cp * dtdt - (k * (t_yy + t_zz) + k_y * t_y + k_z * t_z);
    };

    std::vector<double> errors;
    int n = 10, steps = 8;
    for (int level = 0; level < 3; ++level) {
        Mesh mesh = uniform_box(w, l, n, n, Region::Reservoir, 1.0);
        double dt = t_final / steps;
        std::vector<double> kappa(mesh.cell_count()), mass(mesh.cell_count());
        std::vector<double> temp(mesh.cell_count());
        for (int iz = 0; iz < mesh.nz(); ++iz)
            for (int iy = 0; iy < mesh.ny(); ++iy) {
                int c = mesh.cell(iy, iz);
                kappa[c] = k_of(mesh.yc(iy), mesh.zc(iz));
                mass[c] = rho_cp * mesh.volume(iy, iz) / dt;
                temp[c] = temp_exact(mesh.yc(iy), mesh.zc(iz), 0.0);
            }
        DiffusionSolver solver(mesh);
        std::vector<double> rhs(mesh.cell_count());
        for (int s = 1; s <= steps; ++s) {
            double t_now = s * dt;
            for (int iz = 0; iz < mesh.nz(); ++iz)
                for (int iy = 0; iy < mesh.ny(); ++iy) {
                    int c = mesh.cell(iy, iz);
                    rhs[c] = mass[c] * temp[c] +
                             source(mesh.yc(iy), mesh.zc(iz), t_now) * mesh.volume(iy, iz);
                }
            auto sol = solver.solve(kappa, &mass, &rhs, 300.0, 300.0, 0.0, 1e-12);
            temp = std::move(sol.value);
        }
        errors.push_back(l2_error(mesh, temp, [&](double y, double z) {
            return temp_exact(y, z, t_final);
        }));
        n *= 2;
        steps *= 4;  // dt ~ h^2 keeps the first-order time error at the spatial order
    }

    CheckResult r;
    r.name = "heat-mms-order";
    r.metric = min_order(errors);
    r.threshold = 1.9;
    r.passed = r.metric >= r.threshold;
    r.detail = describe_orders(errors);
    return r;
}

CheckResult check_transport_mms_order() {
    const double w = 0.5, l = 1.0;
    const double d0 = 0.01, u0 = 0.5, tau = 0.5, t_final = 0.5;
    auto dens_exact = [&](double z, double t) {
        double s = std::sin(kPi * z / l);
        return 1.0 + 0.5 * std::exp(-t / tau) * s * s;
    };
    auto source = [&](double z, double t) {
        double e = std::exp(-t / tau);
        double s = std::sin(kPi * z / l), c = std::cos(kPi * z / l);
        double s2 = std::sin(2.0 * kPi * z / l), c2 = std::cos(2.0 * kPi * z / l);
        double n = 1.0 + 0.5 * e * s * s;
        double dndt = -0.5 / tau * e * s * s;
        double dndz = 0.5 * e * (kPi / l) * s2;
        double d2ndz2 = 0.5 * e * 2.0 * (kPi / l) * (kPi / l) * c2;
        double dun_dz = u0 * ((kPi / l) * c * n + s * dndz);
        return dndt - d0 * d2ndz2 + dun_dz;
    };

    MaterialDB db;
    std::vector<double> errors;
    int nz = 16, steps = 16;
    for (int level = 0; level < 3; ++level) {
        Mesh mesh = uniform_box(w, l, 2, nz, Region::Reservoir, 1.0);
        TransportSolver solver(mesh, db);
        double dt = t_final / steps;

        TransportCoefficients co;
        co.diff_y.assign(static_cast<std::size_t>(mesh.ny() + 1) * mesh.nz(), d0);
        co.vel_y.assign(co.diff_y.size(), 0.0);
        co.diff_z.assign(static_cast<std::size_t>(mesh.ny()) * (mesh.nz() + 1), d0);
        co.vel_z.assign(co.diff_z.size(), 0.0);
        for (int iz = 0; iz <= mesh.nz(); ++iz)
            for (int iy = 0; iy < mesh.ny(); ++iy)
                co.vel_z[iz * mesh.ny() + iy] = u0 * std::sin(kPi * mesh.z_faces()[iz] / l);

        std::vector<double> dens(mesh.cell_count());
        for (int iz = 0; iz < mesh.nz(); ++iz)
            for (int iy = 0; iy < mesh.ny(); ++iy)
                dens[mesh.cell(iy, iz)] = dens_exact(mesh.zc(iz), 0.0);

        std::vector<double> src(mesh.cell_count());
        co.source = &src;
        for (int s = 1; s <= steps; ++s) {
            double t_now = s * dt;
            for (int iz = 0; iz < mesh.nz(); ++iz)
                for (int iy = 0; iy < mesh.ny(); ++iy)
                    src[mesh.cell(iy, iz)] = source(mesh.zc(iz), t_now);
            auto out = solver.step_with_coefficients(dens, co, dt);
            dens = std::move(out.density);
        }
        errors.push_back(l2_error(mesh, dens, [&](double, double z) {
            return dens_exact(z, t_final);
        }));
        nz *= 2;
        steps *= 2;  // dt ~ h
    }

    CheckResult r;
    r.name = "transport-mms-order";
    r.metric = min_order(errors);
    r.threshold = 0.9;
    r.passed = r.metric >= r.threshold;
    r.detail = describe_orders(errors);
    return r;
}

std::vector<CheckResult> run_verification(int conservation_steps) {
    return {check_laplace_uniform(),
            check_series_stack(),
            check_heat_slab(),
            check_gaussian_diffusion(),
            check_zero_drive_conservation(conservation_steps),
            check_potential_mms_order(),
            check_heat_mms_order(),
            check_transport_mms_order()};
}

} // namespace taox
