#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/implicit_diffusion.hpp"

namespace mfg {

/// Drift sampled at time level k (t = t_start + k dt). The reference must
/// stay valid until the next call.
using DriftProvider = std::function<const VectorField&(std::size_t step)>;

DriftProvider constant_drift(VectorField v);

/// Forward Fokker-Planck problem  d_t rho - nu Lap rho + div(rho V) = 0,
/// rho = 0 on the boundary, rho(t_start) = rho0.
struct FpProblem {
    double nu = 0.0;
    ScalarField rho0{Grid::line(1.0, 3)};
    DriftProvider drift;
    double t_start = 0.0;
    double t_end = 0.0;
    double dt = 0.0;

    /// Throws PreconditionError on nu/dt/span or rho0 sign/boundary violations.
    void validate() const;
};

/// IMEX Fokker-Planck step with a cached diffusion factorization.
///
/// Advection is explicit with node-based flux splitting:
///   F_{i+1/2} = max(V_i, 0) rho_i + min(V_{i+1}, 0) rho_{i+1}
/// per axis, so that the discrete mass changes only through boundary faces
/// and the explicit update keeps rho >= 0 when
///   dt * max_i sum_k |V_k,i| / h_k <= 1.
/// Diffusion is backward Euler: (I - nu dt Lap_h) rho_new = rho_adv.
class FpStepper {
public:
    FpStepper(const Grid& grid, double nu, double dt);

    /// Throws CflViolation when the ratio above exceeds 1.
    ScalarField step(const ScalarField& rho, const VectorField& drift) const;
    double cfl_ratio(const VectorField& drift) const noexcept;

    double nu() const noexcept { return nu_; }
    double dt() const noexcept { return dt_; }

private:
    double nu_;
    double dt_;
    ShiftedLaplacianSolver diffusion_;
};

/// Convenience single step (factors the diffusion operator on every call).
ScalarField fp_step(const ScalarField& rho, const VectorField& drift, double nu, double dt);

/// Explicit conservative upwind update rho - dt div(rho V) (no diffusion).
ScalarField fp_advect(const ScalarField& rho, const VectorField& drift, double dt);

struct FpTrajectory {
    std::vector<double> times;
    std::vector<ScalarField> rho;  // every time level
    std::vector<double> mass;
    std::vector<double> l1;
    std::vector<double> l2;
    std::vector<double> linf;
    std::vector<std::size_t> snapshot_steps;
};

FpTrajectory fp_solve(const FpProblem& problem, std::span<const double> snapshot_times = {});

}  // namespace mfg
