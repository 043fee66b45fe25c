#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfg/coupling.hpp"
#include "mfg/field.hpp"
#include "mfg/kappa.hpp"
#include "mfg/run_record.hpp"

namespace mfg {

/// One machine-parseable verdict: `CHECK <name> PASS|FAIL <value> <tolerance>`.
struct CheckLine {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double tolerance = 0.0;
};

/// Least-squares fit of log(series) = log(c) - alpha t.
struct RateFit {
    double alpha = 0.0;
    double c = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double r2 = 0.0;
    std::size_t samples = 0;
};

struct Report {
    std::vector<CheckLine> checks;
    std::vector<std::pair<std::string, RateFit>> fits;
    std::vector<std::string> notes;

    bool all_pass() const noexcept;
    void append(Report other);
};

/// Fit over the samples with t in [t_lo, t_hi]. Throws PreconditionError if
/// a sample in the window is not strictly positive or fewer than 2 remain.
RateFit fit_exponential(std::span<const double> times, std::span<const double> series, double t_lo, double t_hi);

/// Fit on the trailing window: among samples with t <= t_end and
/// series > 10 eps * reference (reference = first sample, or the window
/// maximum if that is zero), keep the last half. Empty when fewer than 4
/// samples qualify.
std::optional<RateFit> fit_trailing(std::span<const double> times, std::span<const double> series, double t_end);

/// max over interior recorded times of |c'(t) + m(t)|, with c = int rho phi
/// differentiated by centered differences. Throws PreconditionError for
/// fewer than 3 samples.
double rho_phi_identity_residual(const RunRecord& record);

/// Passes when the residual is <= tol * m(0) (tol * 1 when m(0) = 0).
CheckLine check_rho_phi_identity(const RunRecord& record, double tol);

/// m non-increasing and m <= m(0), with 1e-12 m(0) round-off slack.
CheckLine check_mass_monotone(const RunRecord& record);

struct LongTimeOptions {
    double t_end = 0.0;        // end of the asymptotic window (e.g. T/2)
    double rho_tol = 1e-6;     // relative to |rho_0|_inf
    double phi_tol = 1e-3;     // relative to |Psi|_inf
    double h1_factor = 10.0;   // H1 level = h1_factor * phi_tol * |Psi|_inf
    double r2_min = 0.95;
};

/// Decay of |rho_t|_inf, |phi_t - Psi|_inf and the H1 seminorm of
/// phi_t - Psi on [0, t_end], with trailing-window exponential fits.
Report check_long_time(const RunRecord& record, const LongTimeOptions& options);

/// min rho >= -tol over all levels.
CheckLine check_positivity(std::span<const ScalarField> rho, double tol);

/// -lower_tol <= phi <= Phi_h + |psi|_inf + upper_tol over all levels.
CheckLine check_phi_bounds(std::span<const ScalarField> phi, const ScalarField& torsion, double psi_linf,
                           double lower_tol, double upper_tol);

/// |V| <= kappa(rho) and |V . grad phi + kappa(rho) |grad phi|| <= tol
/// nodewise at every level of the solution.
Report check_velocity_selection(const MfgSolution& solution, const KappaModel& kappa, double tol);

CheckLine check_fixed_point(const MfgSolution& solution, double tol);

/// Closed-form 1D solution of -nu Psi'' + kappa0 |Psi'| = 1 on (0, L).
double stationary_closed_form(double x, double length, double nu, double kappa0);

/// Max nodal error of a 1D Psi against the closed form; passes when <= factor * h.
CheckLine check_stationary_oracle(const ScalarField& psi, double nu, double kappa0, double factor);

enum class RegularizationKernel { fokker_planck, linearized_hjb };

/// Scaling-family experiment for the L^p -> L^inf smoothing estimates.
/// The fixed `field` is the FP drift or the linearized HJB transport g.
struct RegularizationSetup {
    RegularizationKernel kernel = RegularizationKernel::fokker_planck;
    double nu = 0.1;
    VectorField field{Grid::line(1.0, 3)};
    ScalarField u0{Grid::line(1.0, 3)};
    std::vector<double> scales{1.0, 2.0, 4.0, 8.0};
    double p = 1.5;
    double t1 = 0.25;
    double t2 = 1.0;
    double a = 0.5;
    double dt = 1e-3;
    double tol_lin = 1e-10;
    double cap = 1e3;
};

struct RegularizationReport {
    std::vector<double> ratios;  // R(s) = |u(t2)|_inf / |u(t1)|_p per scale
    double spread = 0.0;         // max R / min R - 1
    Report report;
};

/// Throws PreconditionError unless a < t2 - t1 < 1/a, the times are on the
/// dt grid, and u0 is nonzero.
RegularizationReport check_regularization(const RegularizationSetup& setup);

std::string format_check(const CheckLine& line);

}  // namespace mfg
