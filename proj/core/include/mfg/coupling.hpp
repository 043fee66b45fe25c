#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfg/config.hpp"
#include "mfg/field.hpp"
#include "mfg/kappa.hpp"

namespace mfg {

/// Optimal drift V = -kappa(rho) grad_phi / |grad_phi| where
/// |grad_phi| > floor, and V = 0 elsewhere.
VectorField select_velocity(const VectorField& grad_phi, const ScalarField& rho, const KappaModel& kappa,
                            double floor);

/// Finite-horizon MFG problem with every datum resolved on the grid.
struct MfgProblem {
    Grid grid = Grid::line(1.0, 3);
    double nu = 0.1;
    KappaModel kappa;
    ScalarField rho0{Grid::line(1.0, 3)};
    ScalarField psi{Grid::line(1.0, 3)};
    double T = 1.0;
    double dt = 1e-3;
    double theta = 0.5;
    double tol = 1e-6;
    int max_outer = 50;
    InitKind init = InitKind::uncongested;
    double grad_floor = 0.0;
    std::vector<double> snapshot_times;

    void validate() const;
};

/// Resolves the data specs of a config (computes Psi when psi = stationary).
MfgProblem make_problem(const MfgConfig& config);

/// Stationary Psi for the config's grid, nu and kappa(0).
ScalarField stationary_for(const MfgConfig& config);

struct MfgSolution {
    std::vector<double> times;      // 0, dt, ..., T
    std::vector<ScalarField> rho;   // density produced by the last drift iterate
    std::vector<ScalarField> phi;   // value function for K = kappa(rho)
    std::vector<VectorField> V;     // velocity selected from (grad phi, rho)
    std::vector<double> residual_history;
    std::vector<double> drift_norm_history;  // max_t |V^k|_inf of every damped iterate
    std::vector<double> residual_by_time;    // last outer iteration, per time level
    bool converged = false;
    int iterations = 0;
    double grad_floor = 0.0;
    std::vector<std::size_t> snapshot_steps;
};

/// Damped Picard iteration
///   rho^k = FP(V^{k-1}),  phi^k = HJB(kappa(rho^k)),
///   V^k = (1 - theta) V^{k-1} + theta select(grad phi^k, rho^k),
/// started from the uncongested drift (or zero). The residual of iteration
/// k is max_t |V^k - V^{k-1}|_inf + max_t |rho^k - rho^{k-1}|_L1 (the rho
/// term is omitted at k = 1). Non-convergence is reported through
/// `converged`, never thrown.
MfgSolution mfg_solve_finite(const MfgProblem& problem);
MfgSolution mfg_solve_finite(const MfgConfig& config);

struct HorizonSweepResult {
    std::vector<double> horizons;
    std::vector<MfgSolution> solutions;
    double window_end = 0.0;  // T_min / 2
    /// Sup over [0, window_end] of |rho_{T_i} - rho_{T_{i+1}}|_inf (size H - 1).
    std::vector<double> rho_discrepancy;
    std::vector<double> phi_discrepancy;
};

/// Solves the same problem for each (strictly increasing) horizon and
/// compares consecutive horizons on the common early window.
HorizonSweepResult mfg_solve_horizon_sweep(const MfgProblem& base, std::span<const double> horizons);

}  // namespace mfg
