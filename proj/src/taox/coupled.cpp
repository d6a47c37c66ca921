#include "taox/coupled.hpp"

#include "taox/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace taox {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(outer_tol > 0.0)) throw std::invalid_argument("solver: outer_tol must be positive");
    if (outer_max_iters < 1) throw std::invalid_argument("solver: outer_max_iters must be >= 1");
    if (!(damping > 0.0) || damping > 1.0)
        throw std::invalid_argument("solver: damping must be in (0, 1]");
    if (!(linear_tol > 0.0)) throw std::invalid_argument("solver: linear_tol must be positive");
    if (max_step_halvings < 0 || max_step_halvings > 40)
        throw std::invalid_argument("solver: max_step_halvings out of range");
    if (!(picard_tol > 0.0) || picard_max_iters < 1)
        throw std::invalid_argument("solver: picard settings out of range");
}

namespace {

PotentialSolver::Options picard_options(const SolverConfig& cfg) {
    PotentialSolver::Options opt;
    opt.tol = cfg.picard_tol;
    opt.max_iters = cfg.picard_max_iters;
    opt.damping = cfg.damping;
    opt.linear_tol = cfg.linear_tol;
    opt.limit_current = cfg.limit_current;
    return opt;
}

} // namespace

CoupledStepper::CoupledStepper(const Mesh& mesh, const MaterialDB& db,
                               const ComplianceConfig& compliance, const SolverConfig& cfg)
    : mesh_(mesh),
      db_(db),
      compliance_(compliance),
      cfg_(cfg),
      potential_(mesh, db, compliance, picard_options(cfg)),
      heat_(mesh, db, {cfg.linear_tol}),
      transport_(mesh, db, {cfg.linear_tol}) {
    cfg_.validate();
}

StepReport CoupledStepper::advance(FieldState& state, double v1, double dt) {
    return advance_impl(state, v1, dt, 0);
}

void CoupledStepper::set_current_limit(bool on) {
    cfg_.limit_current = on;
    potential_.set_current_limit(on);
}

StepReport CoupledStepper::advance_impl(FieldState& state, double v1, double dt, int depth) {
    try {
        return attempt(state, v1, dt);
    } catch (const SolverError&) {
        if (depth >= cfg_.max_step_halvings) throw;
        StepReport first = advance_impl(state, v1, 0.5 * dt, depth + 1);
        StepReport second = advance_impl(state, v1, 0.5 * dt, depth + 1);
        second.outer_iterations = std::max(first.outer_iterations, second.outer_iterations);
        second.substeps = first.substeps + second.substeps;
        second.min_dt = std::min(first.min_dt, second.min_dt);
        second.max_temperature = std::max(first.max_temperature, second.max_temperature);
        if (first.crossed) {
            second.crossed = true;
            second.crossing_time = first.crossing_time;
            second.crossing_v2 = first.crossing_v2;
            second.crossing_current = first.crossing_current;
        }
        return second;
    }
}

StepReport CoupledStepper::attempt(FieldState& state, double v1, double dt) {
    const int n_cells = mesh_.cell_count();
    const std::vector<double>& n0 = state.vacancy_density;
    const std::vector<double>& t0 = state.temperature;

    std::vector<double> n_k = n0;
    std::vector<double> t_k = t0;
    std::vector<double> e_guess =
        state.field_magnitude.size() == static_cast<std::size_t>(n_cells)
            ? state.field_magnitude
            : std::vector<double>(n_cells, 0.0);
    std::vector<double> q(n_cells);

    PotentialResult pot;
    HeatSolver::Result heat;
    TransportSolver::Result trans;
    double change = 0.0;
    bool converged = false;
    int outer = 0;

    // The joint (temperature, density) iterate is driven by Anderson-
    // accelerated fixed-point mixing. Plain damping cannot cover this map:
    // near the runaway threshold it carries a flip mode between a hot
    // resistive branch and a cool clamped one (slope well below -1) together
    // with a slow monotone filament-growth mode (slope near +1), and no
    // single relaxation factor stabilises both. Halving dt is no substitute
    // either, because the filament thermal response is effectively
    // instantaneous at any usable step. The iterate lives in the scaled space
    // (T / ambient, n / saturation); damped restart steps keep it inside
    // physical bounds and any accelerated point is clamped back into them.
    const std::size_t nv = 2 * static_cast<std::size_t>(n_cells);
    const std::size_t depth = 3;
    std::vector<double> x(nv), r(nv), x_prev, r_prev;
    std::vector<std::vector<double>> dx_hist, dr_hist;
    for (int c = 0; c < n_cells; ++c) {
        x[c] = t_k[c] / db_.ambient_temperature;
        x[n_cells + c] = n_k[c] / db_.density_saturation;
    }
    double best_change = std::numeric_limits<double>::infinity();

    while (outer < cfg_.outer_max_iters) {
        ++outer;
        pot = potential_.solve(v1, n_k, t_k, &e_guess);
        e_guess = pot.field_magnitude;
        for (int c = 0; c < n_cells; ++c)
            q[c] = pot.sigma[c] * pot.field_magnitude[c] * pot.field_magnitude[c];

        heat = heat_.step(t0, n_k, q, dt);
        double d_temp = 0.0;
        for (int c = 0; c < n_cells; ++c) {
            d_temp = std::max(d_temp, std::abs(heat.temperature[c] - t_k[c]) / t_k[c]);
            r[c] = (heat.temperature[c] - t_k[c]) / db_.ambient_temperature;
        }

        double d_dens = 0.0;
        if (!cfg_.freeze_transport) {
            trans = transport_.step(n0, pot.psi, t_k, dt);
            for (int c = 0; c < n_cells; ++c)
                r[n_cells + c] = (trans.density[c] - n_k[c]) / db_.density_saturation;
            for (int c : mesh_.oxide_cells())
                d_dens =
                    std::max(d_dens, std::abs(trans.density[c] - n_k[c]) / db_.density_saturation);
        } else {
            for (int c = 0; c < n_cells; ++c) r[n_cells + c] = 0.0;
        }

        change = std::max(d_temp, d_dens);
        if (change < cfg_.outer_tol) {
            converged = true;
            break;
        }

        if (!x_prev.empty()) {
            std::vector<double> dx(nv), dr(nv);
            double dr_norm = 0.0;
            for (std::size_t i = 0; i < nv; ++i) {
                dx[i] = x[i] - x_prev[i];
                dr[i] = r[i] - r_prev[i];
                dr_norm = std::max(dr_norm, std::abs(dr[i]));
            }
            // A vanishing residual difference would make the least squares
            // system singular; such a column carries no slope information.
            if (dr_norm > 1e-15) {
                dx_hist.push_back(std::move(dx));
                dr_hist.push_back(std::move(dr));
                if (dx_hist.size() > depth) {
                    dx_hist.erase(dx_hist.begin());
                    dr_hist.erase(dr_hist.begin());
                }
            }
        }
        if (change > 10.0 * best_change) {
            dx_hist.clear();
            dr_hist.clear();
        }
        best_change = std::min(best_change, change);
        x_prev = x;
        r_prev = r;

        bool accelerated = false;
        if (!dr_hist.empty()) {
            const std::size_t m = dr_hist.size();
            Eigen::MatrixXd gram(m, m);
            Eigen::VectorXd rhs(m);
            for (std::size_t i = 0; i < m; ++i) {
                rhs(i) = 0.0;
                for (std::size_t l = 0; l < nv; ++l) rhs(i) += dr_hist[i][l] * r[l];
                for (std::size_t j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (std::size_t l = 0; l < nv; ++l) s += dr_hist[i][l] * dr_hist[j][l];
                    gram(i, j) = gram(j, i) = s;
                }
            }
            for (std::size_t i = 0; i < m; ++i) gram(i, i) += 1e-13 * (1.0 + gram.trace());
            Eigen::VectorXd gamma = gram.ldlt().solve(rhs);
            // Oversized coefficients mean the columns barely span the
            // residual; the extrapolation would be noise-driven.
            if (gamma.allFinite() && gamma.cwiseAbs().maxCoeff() < 50.0) {
                for (std::size_t l = 0; l < nv; ++l) {
                    double xi = x[l] + r[l];
                    for (std::size_t i = 0; i < m; ++i)
                        xi -= gamma(i) * (dx_hist[i][l] + dr_hist[i][l]);
                    x[l] = xi;
                }
                // Blowup guard only: the bounds sit far outside anything a
                // converged state reaches (density can legitimately pile up
                // past saturation during reset compression), so a clamp means
                // the extrapolation left the physical regime entirely. A
                // clamp invalidates the linear model behind the history.
                bool clamped = false;
                for (int c = 0; c < n_cells; ++c) {
                    double v = std::min(20.0, std::max(0.3, x[c]));
                    if (v != x[c]) clamped = true;
                    x[c] = v;
                }
                for (int c = 0; c < n_cells; ++c) {
                    double v = std::min(100.0, std::max(0.0, x[n_cells + c]));
                    if (v != x[n_cells + c]) clamped = true;
                    x[n_cells + c] = v;
                }
                if (clamped) {
                    dx_hist.clear();
                    dr_hist.clear();
                }
                accelerated = true;
            }
        }
        if (!accelerated)
            for (std::size_t l = 0; l < nv; ++l) x[l] += cfg_.damping * r[l];

        for (int c = 0; c < n_cells; ++c) {
            t_k[c] = x[c] * db_.ambient_temperature;
            n_k[c] = x[n_cells + c] * db_.density_saturation;
        }
    }
    // A change within an order of magnitude of the tolerance after the full
    // iteration budget is the asymptotic tail crawling at the inner solver
    // noise floor, not a stall; halving dt cannot improve it because the
    // filament thermal response is already quasi-steady at any usable step.
    if (!converged && change < 10.0 * cfg_.outer_tol) converged = true;
    if (!converged)
        throw SolverError("coupled: fixed point stalled", change, outer);

    if (!cfg_.freeze_transport) state.vacancy_density = std::move(trans.density);
    state.temperature = std::move(heat.temperature);
    state.potential = std::move(pot.psi);
    state.field_magnitude = std::move(pot.field_magnitude);
    state.time += dt;

    StepReport rep;
    rep.outer_iterations = outer;
    rep.substeps = 1;
    rep.min_dt = dt;
    rep.terminal_current = pot.terminal_current;
    rep.v2 = pot.v2;
    rep.sigma_cml = pot.sigma_cml;
    rep.max_temperature = heat.max_temperature;
    rep.at_compliance =
        std::abs(pot.terminal_current) >= kComplianceDetectionFraction * compliance_.i_cc;
    if (rep.at_compliance) {
        rep.crossed = true;
        rep.crossing_time = state.time;
        rep.crossing_v2 = pot.v2;
        rep.crossing_current = pot.terminal_current;
    }
    return rep;
}

PotentialResult CoupledStepper::probe(const FieldState& state, double v1) {
    std::vector<double> ambient(mesh_.cell_count(), db_.ambient_temperature);
    return potential_.solve(v1, state.vacancy_density, ambient, nullptr);
}

} // namespace taox
