#include "mfg/hjb_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>

#include "mfg/error.hpp"
#include "mfg/operators.hpp"
#include "mfg/time_grid.hpp"

namespace mfg {

namespace {

double inverse_spacing(const Grid& g) {
    double s = 0.0;
    for (int k = 0; k < g.dim(); ++k) s += 1.0 / (g.h(k) * g.h(k));
    return std::sqrt(s);
}

}  // namespace

CoefficientProvider constant_coefficient(ScalarField k) {
    auto held = std::make_shared<const ScalarField>(std::move(k));
    return [held](std::size_t) -> const ScalarField& { return *held; };
}

void HjbProblem::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw PreconditionError("hjb: nu must be finite and > 0");
    step_count(0.0, T, dt);
    if (!K) throw PreconditionError("hjb: coefficient provider is empty");
    if (psi.min() < 0.0) throw PreconditionError("hjb: final datum psi must be nonnegative");
    if (psi.boundary_max_abs() != 0.0) throw PreconditionError("hjb: final datum psi must vanish on the boundary");
}

HjbStepper::HjbStepper(const Grid& grid, double nu, double dt)
    : nu_(nu), dt_(dt), inv_h_(inverse_spacing(grid)), diffusion_(grid, 1.0, nu * dt) {
    if (!(nu > 0.0)) throw PreconditionError("hjb: nu must be > 0");
    if (!(dt > 0.0)) throw PreconditionError("hjb: dt must be > 0");
}

double HjbStepper::cfl_ratio(const ScalarField& K) const noexcept { return dt_ * K.max_abs() * inv_h_; }

ScalarField HjbStepper::step(const ScalarField& phi, const ScalarField& K) const {
    require_same_grid(phi.grid(), diffusion_.grid(), "hjb step");
    require_same_grid(K.grid(), diffusion_.grid(), "hjb step (K)");
    if (K.min() < 0.0) throw PreconditionError("hjb: K must be nonnegative");
    const double ratio = cfl_ratio(K);
    if (!std::isfinite(ratio)) throw PreconditionError("hjb: K is not finite");
    if (ratio > 1.0 + 1e-12) throw CflViolation("hjb: explicit Hamiltonian step", ratio);

    const ScalarField grad_norm = godunov_gradient_norm(phi);
    ScalarField rhs = phi;
    const Grid& g = phi.grid();
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (g.is_boundary(i)) {
            rhs[i] = 0.0;
            continue;
        }
        rhs[i] += dt_ * (1.0 - K[i] * grad_norm[i]);
    }
    return diffusion_.solve(rhs);
}

ScalarField hjb_step_backward(const ScalarField& phi, const ScalarField& K, double nu, double dt) {
    return HjbStepper(phi.grid(), nu, dt).step(phi, K);
}

ScalarField torsion_solve(double nu, const Grid& grid) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw PreconditionError("torsion: nu must be finite and > 0");
    ScalarField rhs(grid, 1.0);
    rhs.zero_boundary();
    return ShiftedLaplacianSolver(grid, 0.0, nu).solve(rhs);
}

HjbTrajectory hjb_solve(const HjbProblem& problem, std::span<const double> snapshot_times,
                        const HjbSolveOptions& options) {
    problem.validate();
    const Grid& g = problem.psi.grid();
    const std::size_t steps = step_count(0.0, problem.T, problem.dt);

    HjbTrajectory out;
    out.snapshot_steps = snapshot_steps(snapshot_times, 0.0, problem.dt, steps);
    out.times.resize(steps + 1);
    out.linf.resize(steps + 1);
    out.l2.resize(steps + 1);
    out.h1.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) out.times[k] = static_cast<double>(k) * problem.dt;

    std::optional<ScalarField> barrier;
    if (options.check_bounds) {
        barrier = options.torsion ? *options.torsion : torsion_solve(problem.nu, g);
        const double m = problem.psi.max_abs();
        for (std::size_t i = 0; i < barrier->size(); ++i) (*barrier)[i] += m;
        out.upper_barrier_max = barrier->max();
    }
    const auto check = [&](const ScalarField& phi, std::size_t k) {
        if (!barrier) return;
        for (std::size_t i = 0; i < phi.size(); ++i) {
            if (phi[i] < -options.lower_tol || phi[i] > (*barrier)[i] + options.upper_tol) {
                throw BoundViolation("hjb: phi = " + std::to_string(phi[i]) + " at node " + std::to_string(i) +
                                     ", t = " + std::to_string(out.times[k]) +
                                     " leaves [0, Phi_h + max psi]");
            }
        }
    };

    // Fill phi from the back; phi[steps] = psi.
    std::vector<ScalarField> levels(steps + 1, ScalarField(g));
    levels[steps] = problem.psi;
    check(levels[steps], steps);
    const HjbStepper stepper(g, problem.nu, problem.dt);
    for (std::size_t k = steps; k-- > 0;) {
        levels[k] = stepper.step(levels[k + 1], problem.K(k + 1));
        check(levels[k], k);
    }
    for (std::size_t k = 0; k <= steps; ++k) {
        const Norms n = discrete_norms(levels[k]);
        out.linf[k] = n.linf;
        out.l2[k] = n.l2;
        out.h1[k] = n.h1_seminorm;
    }
    out.phi = std::move(levels);
    return out;
}

double hjb_max_dt(const Grid& grid, double kappa) { return 1.0 / (kappa * inverse_spacing(grid)); }

void StationaryProblem::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw PreconditionError("stationary: nu must be finite and > 0");
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) throw PreconditionError("stationary: kappa0 must be > 0");
    if (!(tol > 0.0)) throw PreconditionError("stationary: tol must be > 0");
    if (!(max_pseudo_time > 0.0)) throw PreconditionError("stationary: max_pseudo_time must be > 0");
    if (dt < 0.0) throw PreconditionError("stationary: dt must be >= 0 (0 = automatic)");
}

StationaryResult stationary_solve(const StationaryProblem& problem) {
    problem.validate();
    const Grid& g = problem.grid;
    const double dt = problem.dt > 0.0 ? problem.dt : 0.9 * hjb_max_dt(g, problem.kappa0);
    const HjbStepper stepper(g, problem.nu, dt);
    const ScalarField K(g, problem.kappa0);

    StationaryResult out{ScalarField(g), 0.0, 0.0, 0, dt};
    const double threshold = problem.tol * dt;
    while (true) {
        ScalarField next = stepper.step(out.psi, K);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) change = std::max(change, std::abs(next[i] - out.psi[i]));
        out.psi = std::move(next);
        out.pseudo_time += dt;
        ++out.steps;
        out.residual = change / dt;
        if (change <= threshold) return out;
        if (out.pseudo_time >= problem.max_pseudo_time) {
            throw NonConvergence("stationary: no steady state within max_pseudo_time", out.residual);
        }
    }
}

LinearizedHjbStepper::LinearizedHjbStepper(const Grid& grid, double nu, double dt)
    : dt_(dt), diffusion_(grid, 1.0, nu * dt) {
    if (!(nu > 0.0)) throw PreconditionError("linearized hjb: nu must be > 0");
    if (!(dt > 0.0)) throw PreconditionError("linearized hjb: dt must be > 0");
}

ScalarField LinearizedHjbStepper::step(const ScalarField& u, const VectorField& g) const {
    require_same_grid(u.grid(), g.grid(), "linearized hjb step");
    const double ratio = dt_ * g.max_directional_rate();
    if (ratio > 1.0 + 1e-12) throw CflViolation("linearized hjb: explicit transport step", ratio);
    const VectorField du = gradient_upwind(u, g);
    ScalarField rhs = u;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (u.grid().is_boundary(i)) continue;
        double adv = 0.0;
        for (int k = 0; k < g.dim(); ++k) adv += g.component(k)[i] * du.component(k)[i];
        rhs[i] -= dt_ * adv;
    }
    rhs.zero_boundary();
    return diffusion_.solve(rhs);
}

}  // namespace mfg
