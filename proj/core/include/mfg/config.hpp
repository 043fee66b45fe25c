#pragma once

#include <string>
#include <vector>

#include "mfg/field.hpp"
#include "mfg/kappa.hpp"

namespace mfg {

struct GridSpec {
    int dim = 1;
    double lx = 1.0;
    double ly = 1.0;
    int nx = 99;
    int ny = 99;

    Grid make() const;
    bool operator==(const GridSpec&) const = default;
};

/// Initial density. Centers and radius are fractions of the domain extent.
struct DensitySpec {
    enum class Kind { zero, bump, sine, constant };
    Kind kind = Kind::bump;
    double amplitude = 1.0;
    double center_x = 0.5;
    double center_y = 0.5;
    double radius = 0.25;

    /// Nonnegative field with zero boundary values.
    ScalarField make(const Grid& grid) const;
    bool operator==(const DensitySpec&) const = default;
};

/// Final datum of the HJB equation.
///   zero:        psi = 0
///   stationary:  psi = Psi (stationary solution with K = kappa(0))
///   torsion:     psi = Phi_h + amplitude on interior nodes
///   bump:        amplitude * prod_k sin(pi x_k / L_k)
struct FinalDatumSpec {
    enum class Kind { zero, stationary, torsion, bump };
    Kind kind = Kind::zero;
    double amplitude = 0.0;
    bool operator==(const FinalDatumSpec&) const = default;
};

/// Fixed drift for standalone Fokker-Planck runs.
///   inward / outward: speed times the unit vector towards / away from the center.
struct DriftSpec {
    enum class Kind { zero, constant, inward, outward };
    Kind kind = Kind::zero;
    double vx = 0.0;
    double vy = 0.0;
    double speed = 0.0;

    VectorField make(const Grid& grid) const;
    bool operator==(const DriftSpec&) const = default;
};

enum class InitKind { uncongested, zero };

struct SchemeConfig {
    double dt = 1e-3;
    double theta = 0.5;
    double tol_fp = 1e-6;
    int max_outer = 50;
    InitKind init = InitKind::uncongested;
    /// Gradient floor for velocity selection; 0 selects 1e-10 sup(kappa) / min h.
    double grad_floor = 0.0;
    double stationary_tol = 1e-11;
    double stationary_max_time = 1e3;
    std::vector<double> snapshot_times;

    bool operator==(const SchemeConfig&) const = default;
};

/// Every check name `verify` understands, in execution order.
const std::vector<std::string>& known_checks();

/// Checks run by `verify` and their tolerances.
struct DiagnosticsConfig {
    std::vector<std::string> checks = known_checks();
    double identity_tol = 0.05;
    double rho_decay_tol = 1e-6;
    double phi_decay_tol = 1e-3;
    double h1_factor = 10.0;
    double r2_min = 0.95;
    double window_fraction = 0.5;
    double reg_p = 1.5;
    double reg_t1 = 0.25;
    double reg_t2 = 1.0;
    double reg_a = 0.5;
    double reg_cap = 1e3;
    double reg_tol_lin = 1e-10;
    double stationary_err_factor = 2.0;
    double rho_lower_tol = 1e-12;
    double phi_lower_tol = 1e-12;
    double phi_upper_tol = 1e-8;

    bool operator==(const DiagnosticsConfig&) const = default;
};

/// Full problem and scheme description.
struct MfgConfig {
    GridSpec grid;
    double nu = 0.1;
    double T = 1.0;
    KappaModel kappa;
    DensitySpec rho0;
    FinalDatumSpec psi;
    DriftSpec drift;
    SchemeConfig scheme;
    DiagnosticsConfig diagnostics;

    /// Throws ConfigError naming the offending `[section].key`.
    void validate() const;
    /// Effective gradient floor (resolves grad_floor = 0).
    double grad_floor() const;

    bool operator==(const MfgConfig&) const = default;
};

std::string to_string(DensitySpec::Kind k);
std::string to_string(FinalDatumSpec::Kind k);
std::string to_string(DriftSpec::Kind k);
std::string to_string(InitKind k);

}  // namespace mfg
