#include "taox/transport.hpp"

#include "taox/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace taox {

double bernoulli(double x) {
    if (x > 36.0) return x * std::exp(-x);
    if (x < -36.0) return -x;
    if (std::abs(x) < 1e-10) return 1.0 - 0.5 * x;
    return x / std::expm1(x);
}

TransportSolver::TransportSolver(const Mesh& mesh, const MaterialDB& db, const Options& opt)
    : mesh_(mesh), db_(db), opt_(opt) {
    const int ny = mesh_.ny(), nz = mesh_.nz();
    auto oxide = [&](int iy, int iz) { return is_oxide(mesh_.region(iy, iz)); };
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 1; iy < ny; ++iy)
            if (oxide(iy - 1, iz) && oxide(iy, iz))
                faces_.push_back({mesh_.cell(iy - 1, iz), mesh_.cell(iy, iz), iz * (ny + 1) + iy,
                                  false, mesh_.dz(iz) * mesh_.depth(),
                                  mesh_.yc(iy) - mesh_.yc(iy - 1)});
    for (int iz = 1; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            if (oxide(iy, iz - 1) && oxide(iy, iz))
                faces_.push_back({mesh_.cell(iy, iz - 1), mesh_.cell(iy, iz), iz * ny + iy,
                                  true, mesh_.dy(iy) * mesh_.depth(),
                                  mesh_.zc(iz) - mesh_.zc(iz - 1)});
    if (mesh_.oxide_cells().empty())
        throw std::invalid_argument("transport: mesh has no oxide cells");
    int n_ox = static_cast<int>(mesh_.oxide_cells().size());
    a_.resize(n_ox, n_ox);
}

TransportCoefficients TransportSolver::physics_coefficients(
    const std::vector<double>& psi, const std::vector<double>& temperature) const {
    const int ny = mesh_.ny(), nz = mesh_.nz();
    TransportCoefficients co;
    co.diff_y.assign(static_cast<std::size_t>(ny + 1) * nz, 0.0);
    co.vel_y.assign(co.diff_y.size(), 0.0);
    co.diff_z.assign(static_cast<std::size_t>(ny) * (nz + 1), 0.0);
    co.vel_z.assign(co.diff_z.size(), 0.0);
    for (const Face& f : faces_) {
        double di = diffusivity(temperature[f.ci], db_);
        double dj = diffusivity(temperature[f.cj], db_);
        double d_face = 2.0 * di * dj / (di + dj);
        double t_face = 0.5 * (temperature[f.ci] + temperature[f.cj]);
        double grad_psi = (psi[f.cj] - psi[f.ci]) / f.h;
        double grad_t = (temperature[f.cj] - temperature[f.ci]) / f.h;
        double u = drift_velocity(grad_psi, t_face, db_) -
                   d_face * soret_coefficient(t_face, db_) * grad_t;
        if (f.along_z) {
            co.diff_z[f.index] = d_face;
            co.vel_z[f.index] = u;
        } else {
            co.diff_y[f.index] = d_face;
            co.vel_y[f.index] = u;
        }
    }
    return co;
}

TransportSolver::Result TransportSolver::step_with_coefficients(const std::vector<double>& n_old,
                                                                const TransportCoefficients& coeffs,
                                                                double dt) {
    const int n = mesh_.cell_count();
    const int n_ox = static_cast<int>(mesh_.oxide_cells().size());
    if (static_cast<int>(n_old.size()) != n)
        throw std::invalid_argument("transport: density size does not match mesh");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("transport: dt must be positive");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n_ox) + 4 * faces_.size());
    Eigen::VectorXd b(n_ox);

    for (int k = 0; k < n_ox; ++k) {
        int c = mesh_.oxide_cells()[k];
        int iy = c % mesh_.ny(), iz = c / mesh_.ny();
        double vol = mesh_.volume(iy, iz);
        double m = vol / dt;
        trip.emplace_back(k, k, m);
        b[k] = m * n_old[c] + (coeffs.source ? (*coeffs.source)[c] * vol : 0.0);
    }

    for (const Face& f : faces_) {
        double d = f.along_z ? coeffs.diff_z[f.index] : coeffs.diff_y[f.index];
        double u = f.along_z ? coeffs.vel_z[f.index] : coeffs.vel_y[f.index];
        if (!(d > 0.0) || !std::isfinite(d) || !std::isfinite(u))
            throw std::invalid_argument("transport: face coefficients must be finite, d > 0");
        double g = f.area * d / f.h;
        double pe = u * f.h / d;
        double out_i = g * bernoulli(-pe);  // flux leaving ci per unit n_i
        double out_j = g * bernoulli(pe);   // flux leaving cj per unit n_j
        int ki = mesh_.oxide_index(f.ci), kj = mesh_.oxide_index(f.cj);
        trip.emplace_back(ki, ki, out_i);
        trip.emplace_back(ki, kj, -out_j);
        trip.emplace_back(kj, kj, out_j);
        trip.emplace_back(kj, ki, -out_i);
    }

    a_.setFromTriplets(trip.begin(), trip.end());
    a_.makeCompressed();
    if (!analyzed_) {
        lu_.analyzePattern(a_);
        analyzed_ = true;
    }
    lu_.factorize(a_);
    if (lu_.info() != Eigen::Success)
        throw SolverError("transport: factorisation failed", 0.0, 0);
    Eigen::VectorXd x = lu_.solve(b);
    double b_norm = b.norm();
    double residual = (a_ * x - b).norm() / (b_norm > 0.0 ? b_norm : 1.0);
    if (!std::isfinite(residual) || residual > opt_.linear_tol)
        throw SolverError("transport: linear solve residual too large", residual, 1);

    Result out;
    out.density.assign(n, 0.0);
    out.rel_residual = residual;
    double floor = -1e-10 * db_.density_saturation;
    for (int k = 0; k < n_ox; ++k) {
        int c = mesh_.oxide_cells()[k];
        double v = x[k];
        if (v < floor)
            throw SolverError("transport: negative density produced", v, 1);
        v = std::max(v, 0.0);
        out.density[c] = v;
        out.max_change = std::max(out.max_change, std::abs(v - n_old[c]) / db_.density_saturation);
    }
    return out;
}

TransportSolver::Result TransportSolver::step(const std::vector<double>& n_old,
                                              const std::vector<double>& psi,
                                              const std::vector<double>& temperature, double dt) {
    auto coeffs = physics_coefficients(psi, temperature);
    return step_with_coefficients(n_old, coeffs, dt);
}

} // namespace taox
