#include "mfg/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfg/error.hpp"
#include "mfg/time_grid.hpp"

namespace mfg {

namespace {

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) throw ConfigError(key, what);
}

}  // namespace

Grid GridSpec::make() const {
    return dim == 1 ? Grid::line(lx, nx) : Grid::rect(lx, ly, nx, ny);
}

ScalarField DensitySpec::make(const Grid& grid) const {
    const double lx = grid.length(0);
    const double ly = grid.dim() == 2 ? grid.length(1) : lx;
    const double cx = center_x * lx;
    const double cy = center_y * ly;
    const double r_phys = radius * (grid.dim() == 2 ? std::min(lx, ly) : lx);
    ScalarField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (grid.is_boundary(i)) continue;
        const auto p = grid.position(i);
        switch (kind) {
            case Kind::zero:
                break;
            case Kind::constant:
                out[i] = amplitude;
                break;
            case Kind::sine: {
                double v = amplitude * std::sin(std::numbers::pi * p[0] / lx);
                if (grid.dim() == 2) v *= std::sin(std::numbers::pi * p[1] / ly);
                out[i] = std::max(v, 0.0);
                break;
            }
            case Kind::bump: {
                const double dx = p[0] - cx;
                const double dy = grid.dim() == 2 ? p[1] - cy : 0.0;
                const double r = std::sqrt(dx * dx + dy * dy);
                if (r < r_phys) {
                    const double c = std::cos(0.5 * std::numbers::pi * r / r_phys);
                    out[i] = amplitude * c * c;
                }
                break;
            }
        }
    }
    return out;
}

VectorField DriftSpec::make(const Grid& grid) const {
    VectorField out(grid);
    const double cx = 0.5 * grid.length(0);
    const double cy = grid.dim() == 2 ? 0.5 * grid.length(1) : 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = grid.position(i);
        switch (kind) {
            case Kind::zero:
                break;
            case Kind::constant:
                out.component(0)[i] = vx;
                if (grid.dim() == 2) out.component(1)[i] = vy;
                break;
            case Kind::inward:
            case Kind::outward: {
                const double sign = kind == Kind::inward ? 1.0 : -1.0;
                const double dx = cx - p[0];
                const double dy = grid.dim() == 2 ? cy - p[1] : 0.0;
                const double r = std::sqrt(dx * dx + dy * dy);
                if (r > 0.0) {
                    out.component(0)[i] = sign * speed * dx / r;
                    if (grid.dim() == 2) out.component(1)[i] = sign * speed * dy / r;
                }
                break;
            }
        }
    }
    return out;
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "fixed_point", "velocity_selection", "mass_monotone", "positivity",      "phi_bounds",
        "rho_phi_identity", "long_time",     "regularization", "stationary_oracle",
    };
    return names;
}

double MfgConfig::grad_floor() const {
    if (scheme.grad_floor > 0.0) return scheme.grad_floor;
    return 1e-10 * kappa.sup() / grid.make().min_h();
}

void MfgConfig::validate() const {
    require(grid.dim == 1 || grid.dim == 2, "[grid].dim", "must be 1 or 2");
    require(grid.lx > 0.0 && std::isfinite(grid.lx), "[grid].lx", "must be > 0");
    require(grid.nx >= 3, "[grid].nx", "must be >= 3");
    if (grid.dim == 2) {
        require(grid.ly > 0.0 && std::isfinite(grid.ly), "[grid].ly", "must be > 0");
        require(grid.ny >= 3, "[grid].ny", "must be >= 3");
    }
    require(nu > 0.0 && std::isfinite(nu), "[physics].nu", "must be > 0");
    require(T > 0.0 && std::isfinite(T), "[physics].T", "must be > 0");

    try {
        (void)KappaModel::make(kappa.kind(), kappa.kappa0(), kappa.r_max(), kappa.kappa_min(), kappa.c());
    } catch (const PreconditionError& e) {
        throw ConfigError("[kappa]", e.what());
    }

    require(rho0.amplitude >= 0.0 && std::isfinite(rho0.amplitude), "[data].rho0_amplitude", "must be >= 0");
    require(rho0.center_x >= 0.0 && rho0.center_x <= 1.0, "[data].rho0_center_x", "must lie in [0, 1]");
    require(rho0.center_y >= 0.0 && rho0.center_y <= 1.0, "[data].rho0_center_y", "must lie in [0, 1]");
    require(rho0.radius > 0.0 && rho0.radius <= 1.0, "[data].rho0_radius", "must lie in (0, 1]");
    require(psi.amplitude >= 0.0 && std::isfinite(psi.amplitude), "[data].psi_amplitude", "must be >= 0");
    require(std::isfinite(drift.vx) && std::isfinite(drift.vy) && std::isfinite(drift.speed), "[data].drift",
            "drift parameters must be finite");

    require(scheme.dt > 0.0 && std::isfinite(scheme.dt), "[scheme].dt", "must be > 0");
    try {
        step_count(0.0, T, scheme.dt);
    } catch (const PreconditionError&) {
        throw ConfigError("[scheme].dt", "horizon T must be an integer multiple of dt");
    }
    const Grid g = grid.make();
    double inv_h = 0.0;
    for (int k = 0; k < g.dim(); ++k) inv_h += 1.0 / (g.h(k) * g.h(k));
    const double cfl = scheme.dt * kappa.sup() * std::sqrt(inv_h);
    require(cfl <= 1.0, "[scheme].dt", "violates the CFL bound dt * sup(kappa) * sqrt(sum 1/h^2) <= 1 (ratio " +
                                           std::to_string(cfl) + ")");
    require(scheme.theta > 0.0 && scheme.theta <= 1.0, "[scheme].theta", "must lie in (0, 1]");
    require(scheme.tol_fp > 0.0, "[scheme].tol_fp", "must be > 0");
    require(scheme.max_outer >= 0, "[scheme].max_outer", "must be >= 0");
    require(scheme.grad_floor >= 0.0, "[scheme].grad_floor", "must be >= 0");
    require(scheme.stationary_tol > 0.0, "[scheme].stationary_tol", "must be > 0");
    require(scheme.stationary_max_time > 0.0, "[scheme].stationary_max_time", "must be > 0");
    try {
        snapshot_steps(scheme.snapshot_times, 0.0, scheme.dt, step_count(0.0, T, scheme.dt));
    } catch (const PreconditionError& e) {
        throw ConfigError("[scheme].snapshot_times", e.what());
    }
    require(std::is_sorted(scheme.snapshot_times.begin(), scheme.snapshot_times.end()) &&
                std::adjacent_find(scheme.snapshot_times.begin(), scheme.snapshot_times.end()) ==
                    scheme.snapshot_times.end(),
            "[scheme].snapshot_times", "must be strictly increasing");

    const auto& d = diagnostics;
    for (const auto& c : d.checks) {
        require(std::find(known_checks().begin(), known_checks().end(), c) != known_checks().end(),
                "[diagnostics].checks", "unknown check '" + c + "'");
        require(!(c == "stationary_oracle" && grid.dim != 1), "[diagnostics].checks",
                "stationary_oracle requires dim = 1");
    }
    require(d.identity_tol > 0.0, "[diagnostics].identity_tol", "must be > 0");
    require(d.rho_decay_tol > 0.0, "[diagnostics].rho_decay_tol", "must be > 0");
    require(d.phi_decay_tol > 0.0, "[diagnostics].phi_decay_tol", "must be > 0");
    require(d.h1_factor > 0.0, "[diagnostics].h1_factor", "must be > 0");
    require(d.r2_min >= 0.0 && d.r2_min <= 1.0, "[diagnostics].r2_min", "must lie in [0, 1]");
    require(d.window_fraction > 0.0 && d.window_fraction <= 1.0, "[diagnostics].window_fraction",
            "must lie in (0, 1]");
    require(d.reg_p > 1.0, "[diagnostics].reg_p", "must be > 1");
    require(d.reg_a > 0.0 && d.reg_a < 1.0, "[diagnostics].reg_a", "must lie in (0, 1)");
    require(d.reg_t1 > 0.0 && d.reg_t2 > d.reg_t1, "[diagnostics].reg_t1", "need 0 < reg_t1 < reg_t2");
    const double gap = d.reg_t2 - d.reg_t1;
    require(gap > d.reg_a && gap < 1.0 / d.reg_a, "[diagnostics].reg_t2", "need reg_a < reg_t2 - reg_t1 < 1/reg_a");
    require(d.reg_cap > 0.0, "[diagnostics].reg_cap", "must be > 0");
    require(d.reg_tol_lin > 0.0, "[diagnostics].reg_tol_lin", "must be > 0");
    require(d.stationary_err_factor > 0.0, "[diagnostics].stationary_err_factor", "must be > 0");
    require(d.rho_lower_tol >= 0.0, "[diagnostics].rho_lower_tol", "must be >= 0");
    require(d.phi_lower_tol >= 0.0, "[diagnostics].phi_lower_tol", "must be >= 0");
    require(d.phi_upper_tol >= 0.0, "[diagnostics].phi_upper_tol", "must be >= 0");
}

std::string to_string(DensitySpec::Kind k) {
    switch (k) {
        case DensitySpec::Kind::zero:
            return "zero";
        case DensitySpec::Kind::bump:
            return "bump";
        case DensitySpec::Kind::sine:
            return "sine";
        case DensitySpec::Kind::constant:
            return "constant";
    }
    return "zero";
}

std::string to_string(FinalDatumSpec::Kind k) {
    switch (k) {
        case FinalDatumSpec::Kind::zero:
            return "zero";
        case FinalDatumSpec::Kind::stationary:
            return "stationary";
        case FinalDatumSpec::Kind::torsion:
            return "torsion";
        case FinalDatumSpec::Kind::bump:
            return "bump";
    }
    return "zero";
}

std::string to_string(DriftSpec::Kind k) {
    switch (k) {
        case DriftSpec::Kind::zero:
            return "zero";
        case DriftSpec::Kind::constant:
            return "constant";
        case DriftSpec::Kind::inward:
            return "inward";
        case DriftSpec::Kind::outward:
            return "outward";
    }
    return "zero";
}

std::string to_string(InitKind k) { return k == InitKind::uncongested ? "uncongested" : "zero"; }

}  // namespace mfg
