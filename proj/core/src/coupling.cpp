#include "mfg/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "mfg/error.hpp"
#include "mfg/fp_solver.hpp"
#include "mfg/hjb_solver.hpp"
#include "mfg/operators.hpp"
#include "mfg/time_grid.hpp"

namespace mfg {

VectorField select_velocity(const VectorField& grad_phi, const ScalarField& rho, const KappaModel& kappa,
                            double floor) {
    require_same_grid(grad_phi.grid(), rho.grid(), "select_velocity");
    VectorField v(grad_phi.grid());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double norm = grad_phi.norm_at(i);
        if (!(norm > floor)) continue;
        const double scale = -kappa(rho[i]) / norm;
        for (int k = 0; k < v.dim(); ++k) v.component(k)[i] = scale * grad_phi.component(k)[i];
    }
    return v;
}

void MfgProblem::validate() const {
    if (!(nu > 0.0)) throw PreconditionError("mfg: nu must be > 0");
    step_count(0.0, T, dt);
    if (!(theta > 0.0 && theta <= 1.0)) throw PreconditionError("mfg: theta must lie in (0, 1]");
    if (!(tol > 0.0)) throw PreconditionError("mfg: tolerance must be > 0");
    if (max_outer < 0) throw PreconditionError("mfg: max_outer must be >= 0");
    require_same_grid(grid, rho0.grid(), "mfg rho0");
    require_same_grid(grid, psi.grid(), "mfg psi");
}

ScalarField stationary_for(const MfgConfig& config) {
    StationaryProblem sp{config.grid.make(), config.nu, config.kappa.at_zero(), config.scheme.stationary_tol,
                         config.scheme.stationary_max_time, 0.0};
    return stationary_solve(sp).psi;
}

MfgProblem make_problem(const MfgConfig& config) {
    config.validate();
    MfgProblem p;
    p.grid = config.grid.make();
    p.nu = config.nu;
    p.kappa = config.kappa;
    p.rho0 = config.rho0.make(p.grid);
    p.psi = ScalarField(p.grid);
    switch (config.psi.kind) {
        case FinalDatumSpec::Kind::zero:
            break;
        case FinalDatumSpec::Kind::stationary:
            p.psi = stationary_for(config);
            break;
        case FinalDatumSpec::Kind::torsion: {
            p.psi = torsion_solve(config.nu, p.grid);
            for (std::size_t i = 0; i < p.psi.size(); ++i) {
                if (!p.grid.is_boundary(i)) p.psi[i] += config.psi.amplitude;
            }
            break;
        }
        case FinalDatumSpec::Kind::bump:
            p.psi = DensitySpec{DensitySpec::Kind::sine, config.psi.amplitude, 0.5, 0.5, 1.0}.make(p.grid);
            break;
    }
    p.T = config.T;
    p.dt = config.scheme.dt;
    p.theta = config.scheme.theta;
    p.tol = config.scheme.tol_fp;
    p.max_outer = config.scheme.max_outer;
    p.init = config.scheme.init;
    p.grad_floor = config.grad_floor();
    p.snapshot_times = config.scheme.snapshot_times;
    return p;
}

namespace {

struct Kernels {
    FpStepper fp;
    HjbStepper hjb;
    ScalarField torsion;
};

std::vector<ScalarField> march_fp(const Kernels& ker, const ScalarField& rho0, const std::vector<VectorField>& V,
                                  std::size_t steps) {
    std::vector<ScalarField> rho;
    rho.reserve(steps + 1);
    rho.push_back(rho0);
    for (std::size_t k = 0; k < steps; ++k) rho.push_back(ker.fp.step(rho.back(), V[k]));
    return rho;
}

std::vector<ScalarField> march_hjb(const Kernels& ker, const ScalarField& psi, const std::vector<ScalarField>& K,
                                   std::size_t steps) {
    HjbProblem hp;
    hp.nu = ker.hjb.nu();
    hp.K = [&K](std::size_t k) -> const ScalarField& { return K[k]; };
    hp.psi = psi;
    hp.T = static_cast<double>(steps) * ker.hjb.dt();
    hp.dt = ker.hjb.dt();
    HjbSolveOptions opts;
    opts.torsion = &ker.torsion;
    return hjb_solve(hp, {}, opts).phi;
}

std::vector<VectorField> select_all(const std::vector<ScalarField>& phi, const std::vector<ScalarField>& rho,
                                    const KappaModel& kappa, double floor) {
    std::vector<VectorField> out;
    out.reserve(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) out.push_back(select_velocity(gradient(phi[k]), rho[k], kappa, floor));
    return out;
}

double max_abs_diff(const VectorField& a, const VectorField& b) {
    double m = 0.0;
    for (int k = 0; k < a.dim(); ++k) {
        auto ca = a.component(k);
        auto cb = b.component(k);
        for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
    }
    return m;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

MfgSolution mfg_solve_finite(const MfgProblem& problem) {
    problem.validate();
    const std::size_t steps = step_count(0.0, problem.T, problem.dt);
    const Grid& g = problem.grid;
    const Kernels ker{FpStepper(g, problem.nu, problem.dt), HjbStepper(g, problem.nu, problem.dt),
                      torsion_solve(problem.nu, g)};

    MfgSolution sol;
    sol.grad_floor = problem.grad_floor > 0.0 ? problem.grad_floor : 1e-10 * problem.kappa.sup() / g.min_h();
    sol.snapshot_steps = snapshot_steps(problem.snapshot_times, 0.0, problem.dt, steps);
    sol.times.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) sol.times[k] = static_cast<double>(k) * problem.dt;

    // Initial drift.
    const std::vector<ScalarField> zero_rho(steps + 1, ScalarField(g));
    std::vector<VectorField> V;
    std::vector<ScalarField> phi;
    if (problem.init == InitKind::uncongested) {
        const std::vector<ScalarField> k0(steps + 1, ScalarField(g, problem.kappa.at_zero()));
        phi = march_hjb(ker, problem.psi, k0, steps);
        V = select_all(phi, zero_rho, problem.kappa, sol.grad_floor);
    } else {
        V.assign(steps + 1, VectorField(g));
    }

    std::optional<std::vector<ScalarField>> prev_rho;
    std::vector<ScalarField> rho;
    std::vector<VectorField> selected = V;
    for (int it = 1; it <= problem.max_outer; ++it) {
        rho = march_fp(ker, problem.rho0, V, steps);
        std::vector<ScalarField> K;
        K.reserve(steps + 1);
        for (const auto& r : rho) K.push_back(problem.kappa.apply(r));
        phi = march_hjb(ker, problem.psi, K, steps);
        selected = select_all(phi, rho, problem.kappa, sol.grad_floor);

        std::vector<double> per_time(steps + 1, 0.0);
        double drift_change = 0.0;
        double density_change = 0.0;
        double vmax = 0.0;
        for (std::size_t k = 0; k <= steps; ++k) {
            VectorField next = blend(V[k], selected[k], problem.theta);
            const double dv = max_abs_diff(next, V[k]);
            const double dr = prev_rho ? lp_norm(rho[k] - (*prev_rho)[k], 1.0) : 0.0;
            per_time[k] = dv + dr;
            drift_change = std::max(drift_change, dv);
            density_change = std::max(density_change, dr);
            vmax = std::max(vmax, next.max_norm());
            V[k] = std::move(next);
        }
        const double residual = drift_change + density_change;
        prev_rho = rho;
        sol.residual_history.push_back(residual);
        sol.drift_norm_history.push_back(vmax);
        sol.residual_by_time = std::move(per_time);
        sol.iterations = it;
        if (residual <= problem.tol) {
            sol.converged = true;
            break;
        }
    }

    if (sol.iterations == 0) {
        // Fixed point not attempted: report the state generated by the initial drift.
        rho = march_fp(ker, problem.rho0, V, steps);
        if (phi.empty()) {
            std::vector<ScalarField> K;
            for (const auto& r : rho) K.push_back(problem.kappa.apply(r));
            phi = march_hjb(ker, problem.psi, K, steps);
        }
        selected = V;
        sol.residual_by_time.assign(steps + 1, 0.0);
    }
    sol.rho = std::move(rho);
    sol.phi = std::move(phi);
    sol.V = std::move(selected);
    return sol;
}

MfgSolution mfg_solve_finite(const MfgConfig& config) { return mfg_solve_finite(make_problem(config)); }

HorizonSweepResult mfg_solve_horizon_sweep(const MfgProblem& base, std::span<const double> horizons) {
    if (horizons.empty()) throw PreconditionError("sweep: need at least one horizon");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
        if (!(horizons[i] > horizons[i - 1])) throw PreconditionError("sweep: horizons must be strictly increasing");
    }
    HorizonSweepResult out;
    out.horizons.assign(horizons.begin(), horizons.end());
    for (double T : horizons) {
        MfgProblem p = base;
        p.T = T;
        p.snapshot_times.clear();
        for (double t : base.snapshot_times) {
            if (t <= T) p.snapshot_times.push_back(t);
        }
        out.solutions.push_back(mfg_solve_finite(p));
    }
    out.window_end = 0.5 * horizons.front();
    const auto window_steps = static_cast<std::size_t>(std::floor(out.window_end / base.dt + 1e-9));
    for (std::size_t h = 0; h + 1 < out.solutions.size(); ++h) {
        const MfgSolution& a = out.solutions[h];
        const MfgSolution& b = out.solutions[h + 1];
        double dr = 0.0;
        double dp = 0.0;
        for (std::size_t k = 0; k <= window_steps; ++k) {
            dr = std::max(dr, max_abs_diff(a.rho[k], b.rho[k]));
            dp = std::max(dp, max_abs_diff(a.phi[k], b.phi[k]));
        }
        out.rho_discrepancy.push_back(dr);
        out.phi_discrepancy.push_back(dp);
    }
    return out;
}

}  // namespace mfg
