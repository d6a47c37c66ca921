#include "taox/diffusion.hpp"

#include "taox/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace taox {

DiffusionSolver::DiffusionSolver(const Mesh& mesh, std::vector<std::uint8_t> pinned)
    : mesh_(mesh), pinned_(std::move(pinned)) {
    int n = mesh_.cell_count();
    if (pinned_.empty())
        pinned_.assign(n, 0);
    if (pinned_.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("diffusion: pinned mask does not match mesh");
    eq_of_cell_.assign(n, -1);
    n_eq_ = 0;
    for (int c = 0; c < n; ++c)
        if (!pinned_[c])
            eq_of_cell_[c] = n_eq_++;
    if (n_eq_ == 0)
        throw std::invalid_argument("diffusion: every cell is pinned");
    a_.resize(n_eq_, n_eq_);
}

DiffusionSolver::Result DiffusionSolver::solve(const std::vector<double>& kappa,
                                               const std::vector<double>* mass,
                                               const std::vector<double>* rhs,
                                               double bottom_value, double top_value,
                                               double pinned_value, double linear_tol) {
    const int ny = mesh_.ny();
    const int nz = mesh_.nz();
    const int n = mesh_.cell_count();
    if (kappa.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("diffusion: coefficient field does not match mesh");
    for (double k : kappa)
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("diffusion: coefficients must be finite and positive");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5) * n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_eq_);

    for (int c = 0; c < n; ++c) {
        int e = eq_of_cell_[c];
        if (e < 0)
            continue;
        double m = mass ? (*mass)[c] : 0.0;
        if (m != 0.0)
            trip.emplace_back(e, e, m);
        if (rhs)
            b[e] += (*rhs)[c];
    }

    auto couple = [&](int ci, int cj, double g) {
        int ei = eq_of_cell_[ci];
        int ej = eq_of_cell_[cj];
        if (ei < 0 && ej < 0)
            return;
        if (ei >= 0) {
            trip.emplace_back(ei, ei, g);
            if (ej >= 0)
                trip.emplace_back(ei, ej, -g);
            else
                b[ei] += g * pinned_value;
        }
        if (ej >= 0) {
            trip.emplace_back(ej, ej, g);
            if (ei >= 0)
                trip.emplace_back(ej, ei, -g);
            else
                b[ej] += g * pinned_value;
        }
    };

    // interior y faces
    for (int iz = 0; iz < nz; ++iz) {
        double area = mesh_.dz(iz) * mesh_.depth();
        for (int iy = 1; iy < ny; ++iy) {
            int ci = mesh_.cell(iy - 1, iz);
            int cj = mesh_.cell(iy, iz);
            double g = area / (0.5 * mesh_.dy(iy - 1) / kappa[ci] + 0.5 * mesh_.dy(iy) / kappa[cj]);
            couple(ci, cj, g);
        }
    }
    // interior z faces
    for (int iz = 1; iz < nz; ++iz) {
        for (int iy = 0; iy < ny; ++iy) {
            int ci = mesh_.cell(iy, iz - 1);
            int cj = mesh_.cell(iy, iz);
            double area = mesh_.dy(iy) * mesh_.depth();
            double g = area / (0.5 * mesh_.dz(iz - 1) / kappa[ci] + 0.5 * mesh_.dz(iz) / kappa[cj]);
            couple(ci, cj, g);
        }
    }
    // bottom and top Dirichlet faces
    for (int iy = 0; iy < ny; ++iy) {
        double area = mesh_.dy(iy) * mesh_.depth();
        int cb = mesh_.cell(iy, 0);
        if (int e = eq_of_cell_[cb]; e >= 0) {
            double g = area * kappa[cb] / (0.5 * mesh_.dz(0));
            trip.emplace_back(e, e, g);
            b[e] += g * bottom_value;
        }
        int ct = mesh_.cell(iy, nz - 1);
        if (int e = eq_of_cell_[ct]; e >= 0) {
            double g = area * kappa[ct] / (0.5 * mesh_.dz(nz - 1));
            trip.emplace_back(e, e, g);
            b[e] += g * top_value;
        }
    }

    a_.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
        ldlt_.analyzePattern(a_);
        analyzed_ = true;
    }
    ldlt_.factorize(a_);
    if (ldlt_.info() != Eigen::Success)
        throw SolverError("diffusion: factorisation failed", 0.0, 0);

    Eigen::VectorXd x = ldlt_.solve(b);
    if (ldlt_.info() != Eigen::Success)
        throw SolverError("diffusion: back substitution failed", 0.0, 0);

    double bnorm = b.norm();
    double rnorm = (a_ * x - b).norm();
    double rel = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    if (!(rel <= linear_tol))
        throw SolverError("diffusion: residual " + std::to_string(rel) +
                              " above linear tolerance",
                          rel, 0);

    Result out;
    out.rel_residual = rel;
    out.value.resize(n);
    for (int c = 0; c < n; ++c)
        out.value[c] = eq_of_cell_[c] >= 0 ? x[eq_of_cell_[c]] : pinned_value;

    out.grad_y.assign(static_cast<std::size_t>(ny + 1) * nz, 0.0);
    out.flux_y.assign(static_cast<std::size_t>(ny + 1) * nz, 0.0);
    for (int iz = 0; iz < nz; ++iz) {
        for (int iy = 1; iy < ny; ++iy) {
            int ci = mesh_.cell(iy - 1, iz);
            int cj = mesh_.cell(iy, iz);
            double hc = 0.5 * (mesh_.dy(iy - 1) + mesh_.dy(iy));
            double keff = hc / (0.5 * mesh_.dy(iy - 1) / kappa[ci] + 0.5 * mesh_.dy(iy) / kappa[cj]);
            std::size_t f = static_cast<std::size_t>(iz) * (ny + 1) + iy;
            out.grad_y[f] = (out.value[cj] - out.value[ci]) / hc;
            out.flux_y[f] = keff * out.grad_y[f];
        }
    }

    out.grad_z.assign(static_cast<std::size_t>(nz + 1) * ny, 0.0);
    out.flux_z.assign(static_cast<std::size_t>(nz + 1) * ny, 0.0);
    for (int iy = 0; iy < ny; ++iy) {
        int cb = mesh_.cell(iy, 0);
        std::size_t f0 = static_cast<std::size_t>(0) * ny + iy;
        out.grad_z[f0] = (out.value[cb] - bottom_value) / (0.5 * mesh_.dz(0));
        out.flux_z[f0] = kappa[cb] * out.grad_z[f0];
        int ct = mesh_.cell(iy, nz - 1);
        std::size_t fn = static_cast<std::size_t>(nz) * ny + iy;
        out.grad_z[fn] = (top_value - out.value[ct]) / (0.5 * mesh_.dz(nz - 1));
        out.flux_z[fn] = kappa[ct] * out.grad_z[fn];
    }
    for (int iz = 1; iz < nz; ++iz) {
        for (int iy = 0; iy < ny; ++iy) {
            int ci = mesh_.cell(iy, iz - 1);
            int cj = mesh_.cell(iy, iz);
            double hc = 0.5 * (mesh_.dz(iz - 1) + mesh_.dz(iz));
            double keff = hc / (0.5 * mesh_.dz(iz - 1) / kappa[ci] + 0.5 * mesh_.dz(iz) / kappa[cj]);
            std::size_t f = static_cast<std::size_t>(iz) * ny + iy;
            out.grad_z[f] = (out.value[cj] - out.value[ci]) / hc;
            out.flux_z[f] = keff * out.grad_z[f];
        }
    }

    for (int iy = 0; iy < ny; ++iy) {
        double area = mesh_.dy(iy) * mesh_.depth();
        out.flux_bottom += area * out.flux_z[static_cast<std::size_t>(0) * ny + iy];
        out.flux_top += area * out.flux_z[static_cast<std::size_t>(nz) * ny + iy];
    }
    return out;
}

} // namespace taox
