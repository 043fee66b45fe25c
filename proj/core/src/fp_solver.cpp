#include "mfg/fp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "mfg/error.hpp"
#include "mfg/operators.hpp"
#include "mfg/time_grid.hpp"

namespace mfg {

std::size_t step_count(double t_start, double t_end, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("time step must be finite and > 0");
    if (!(t_end > t_start)) throw PreconditionError("time span must satisfy t_end > t_start");
    const double span = t_end - t_start;
    const double steps = std::round(span / dt);
    if (steps < 1.0 || std::abs(steps * dt - span) > 1e-9 * span) {
        throw PreconditionError("time span " + std::to_string(span) + " is not a multiple of dt " +
                                std::to_string(dt));
    }
    return static_cast<std::size_t>(steps);
}

std::vector<std::size_t> snapshot_steps(std::span<const double> times, double t_start, double dt,
                                        std::size_t steps) {
    std::vector<std::size_t> out;
    out.reserve(times.size());
    for (double t : times) {
        const double k = std::round((t - t_start) / dt);
        if (k < 0.0 || k > static_cast<double>(steps) ||
            std::abs(t_start + k * dt - t) > 1e-8 * std::max(1.0, std::abs(t))) {
            throw PreconditionError("snapshot time " + std::to_string(t) + " is not a time level of the run");
        }
        out.push_back(static_cast<std::size_t>(k));
    }
    return out;
}

DriftProvider constant_drift(VectorField v) {
    auto held = std::make_shared<const VectorField>(std::move(v));
    return [held](std::size_t) -> const VectorField& { return *held; };
}

void FpProblem::validate() const {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw PreconditionError("fp: nu must be finite and > 0");
    step_count(t_start, t_end, dt);
    if (!drift) throw PreconditionError("fp: drift provider is empty");
    if (rho0.min() < 0.0) throw PreconditionError("fp: rho0 must be nonnegative");
    if (rho0.boundary_max_abs() != 0.0) throw PreconditionError("fp: rho0 must vanish on the boundary");
}

ScalarField fp_advect(const ScalarField& rho, const VectorField& drift, double dt) {
    require_same_grid(rho.grid(), drift.grid(), "fp_advect");
    const Grid& g = rho.grid();
    ScalarField out = rho;
    auto r = rho.values();
    for (int k = 0; k < g.dim(); ++k) {
        const std::size_t st = g.stride(k);
        const double c = dt / g.h(k);
        auto v = drift.component(k);
        for (std::size_t idx = 0; idx < g.size(); ++idx) {
            if (g.is_boundary(idx)) continue;
            const double right = std::max(v[idx], 0.0) * r[idx] + std::min(v[idx + st], 0.0) * r[idx + st];
            const double left = std::max(v[idx - st], 0.0) * r[idx - st] + std::min(v[idx], 0.0) * r[idx];
            out[idx] -= c * (right - left);
        }
    }
    out.zero_boundary();
    return out;
}

FpStepper::FpStepper(const Grid& grid, double nu, double dt)
    : nu_(nu), dt_(dt), diffusion_(grid, 1.0, nu * dt) {
    if (!(nu > 0.0)) throw PreconditionError("fp: nu must be > 0");
    if (!(dt > 0.0)) throw PreconditionError("fp: dt must be > 0");
}

double FpStepper::cfl_ratio(const VectorField& drift) const noexcept {
    return dt_ * drift.max_directional_rate();
}

ScalarField FpStepper::step(const ScalarField& rho, const VectorField& drift) const {
    require_same_grid(rho.grid(), diffusion_.grid(), "fp step");
    const double ratio = cfl_ratio(drift);
    if (!std::isfinite(ratio)) throw PreconditionError("fp: drift is not finite");
    if (ratio > 1.0 + 1e-12) throw CflViolation("fp: explicit advection step", ratio);
    ScalarField adv = fp_advect(rho, drift, dt_);
    return diffusion_.solve(adv);
}

ScalarField fp_step(const ScalarField& rho, const VectorField& drift, double nu, double dt) {
    return FpStepper(rho.grid(), nu, dt).step(rho, drift);
}

FpTrajectory fp_solve(const FpProblem& problem, std::span<const double> snapshot_times) {
    problem.validate();
    const std::size_t steps = step_count(problem.t_start, problem.t_end, problem.dt);
    FpTrajectory out;
    out.snapshot_steps = snapshot_steps(snapshot_times, problem.t_start, problem.dt, steps);
    out.times.reserve(steps + 1);
    out.rho.reserve(steps + 1);

    const FpStepper stepper(problem.rho0.grid(), problem.nu, problem.dt);
    const auto record = [&out](double t, ScalarField rho) {
        const Norms n = discrete_norms(rho);
        out.times.push_back(t);
        out.mass.push_back(integrate(rho));
        out.l1.push_back(n.l1);
        out.l2.push_back(n.l2);
        out.linf.push_back(n.linf);
        out.rho.push_back(std::move(rho));
    };

    record(problem.t_start, problem.rho0);
    for (std::size_t k = 0; k < steps; ++k) {
        ScalarField next = stepper.step(out.rho.back(), problem.drift(k));
        record(problem.t_start + static_cast<double>(k + 1) * problem.dt, std::move(next));
    }
    return out;
}

}  // namespace mfg
