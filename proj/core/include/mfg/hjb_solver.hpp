#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/implicit_diffusion.hpp"

namespace mfg {

/// Congestion speed field K at time level k (t = k dt). The reference must
/// stay valid until the next call.
using CoefficientProvider = std::function<const ScalarField&(std::size_t step)>;

CoefficientProvider constant_coefficient(ScalarField k);

/// Backward HJB problem  -d_t phi - nu Lap phi + K |grad phi| - 1 = 0 on
/// (0, T), phi(T) = psi, phi = 0 on the boundary.
struct HjbProblem {
    double nu = 0.0;
    CoefficientProvider K;
    ScalarField psi{Grid::line(1.0, 3)};
    double T = 0.0;
    double dt = 0.0;

    void validate() const;
};

/// One reversed-time IMEX step phi(t + dt) -> phi(t):
///   (I - nu dt Lap_h) phi_new = phi + dt (1 - K G(phi)),
/// with G the Godunov gradient norm. The explicit part is monotone when
///   dt * max K * sqrt(sum_k 1 / h_k^2) <= 1,
/// which makes the whole step order preserving (discrete comparison).
class HjbStepper {
public:
    HjbStepper(const Grid& grid, double nu, double dt);

    ScalarField step(const ScalarField& phi, const ScalarField& K) const;
    double cfl_ratio(const ScalarField& K) const noexcept;

    double nu() const noexcept { return nu_; }
    double dt() const noexcept { return dt_; }

private:
    double nu_;
    double dt_;
    double inv_h_;  // sqrt(sum_k 1/h_k^2)
    ShiftedLaplacianSolver diffusion_;
};

ScalarField hjb_step_backward(const ScalarField& phi, const ScalarField& K, double nu, double dt);

struct HjbSolveOptions {
    /// Assert 0 <= phi <= Phi_h + max psi at every level (needs K >= 0, psi >= 0).
    bool check_bounds = true;
    double lower_tol = 1e-12;
    double upper_tol = 1e-8;
    /// Precomputed discrete torsion function for the bound; computed when null.
    const ScalarField* torsion = nullptr;
};

struct HjbTrajectory {
    std::vector<double> times;     // 0, dt, ..., T
    std::vector<ScalarField> phi;  // phi[k] at times[k]
    std::vector<double> linf;
    std::vector<double> l2;
    std::vector<double> h1;
    std::vector<std::size_t> snapshot_steps;
    double upper_barrier_max = 0.0;  // max over nodes of Phi_h + |psi|_inf
};

HjbTrajectory hjb_solve(const HjbProblem& problem, std::span<const double> snapshot_times = {},
                        const HjbSolveOptions& options = {});

/// Discrete torsion function: -nu Lap_h Phi = 1, Phi = 0 on the boundary.
ScalarField torsion_solve(double nu, const Grid& grid);

struct StationaryProblem {
    Grid grid;
    double nu = 0.0;
    double kappa0 = 0.0;
    double tol = 1e-10;
    double max_pseudo_time = 1e3;
    /// Pseudo-time step; 0 selects 0.9 of the Hamiltonian CFL limit.
    double dt = 0.0;

    void validate() const;
};

struct StationaryResult {
    ScalarField psi{Grid::line(1.0, 3)};
    double pseudo_time = 0.0;
    double residual = 0.0;  // final max |increment| / dt
    std::size_t steps = 0;
    double dt = 0.0;
};

/// Solves -nu Lap Psi + kappa0 |grad Psi| = 1 by marching the HJB step with
/// K = kappa0 from Psi = 0 until max |increment| <= tol * dt. Throws
/// NonConvergence past max_pseudo_time.
StationaryResult stationary_solve(const StationaryProblem& problem);

/// Largest dt for which the HJB explicit part stays monotone with speed kappa.
double hjb_max_dt(const Grid& grid, double kappa);

/// Linear transport-diffusion step u_t - nu Lap u + g . grad u = 0 (the
/// linearized HJB operator in forward time), upwinded on the sign of g,
/// diffusion backward Euler. Used by the regularization experiments.
class LinearizedHjbStepper {
public:
    LinearizedHjbStepper(const Grid& grid, double nu, double dt);
    ScalarField step(const ScalarField& u, const VectorField& g) const;

private:
    double dt_;
    ShiftedLaplacianSolver diffusion_;
};

}  // namespace mfg
