#include "mfg_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mfg/error.hpp"
#include "mfg/fp_solver.hpp"
#include "mfg/hjb_solver.hpp"
#include "mfg/operators.hpp"
#include "mfg/output.hpp"

namespace mfg::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out = "mfg_out";
    std::string horizons;
    long long seed = 0;
    int levels = 3;
};

bool wants(const MfgConfig& c, const std::string& name) {
    return std::find(c.diagnostics.checks.begin(), c.diagnostics.checks.end(), name) != c.diagnostics.checks.end();
}

ScalarField psi_star_for(const MfgConfig& cfg, const MfgProblem& problem) {
    return cfg.psi.kind == FinalDatumSpec::Kind::stationary ? problem.psi : stationary_for(cfg);
}

ScalarField sine_mode(const Grid& g) {
    ScalarField f = ScalarField::sample(g, [&g](double x, double y) {
        double v = std::sin(std::numbers::pi * x / g.length(0));
        if (g.dim() == 2) v *= std::sin(std::numbers::pi * y / g.length(1));
        return v;
    });
    f.zero_boundary();
    return f;
}

void emit(std::ostream& out, const Report& rep) {
    for (const auto& c : rep.checks) out << format_check(c) << '\n';
}

void write_bundle(const fs::path& dir, const MfgConfig& cfg, const RunRecord& record, const Report& rep) {
    write_text(dir / "config.ini", serialize_config(cfg));
    write_record(dir, record);
    write_text(dir / "report.txt", report_text(rep));
}

std::vector<double> parse_horizons(const std::string& text) {
    std::vector<double> hs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        const std::string s = b == std::string::npos ? "" : item.substr(b, e - b + 1);
        double x = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !(x > 0.0)) {
            throw ConfigError("--horizons", "expected positive numbers, got '" + s + "'");
        }
        hs.push_back(x);
    }
    for (std::size_t i = 1; i < hs.size(); ++i) {
        if (!(hs[i] > hs[i - 1])) throw ConfigError("--horizons", "must be strictly increasing");
    }
    return hs;
}

void note_iterations(Report& rep, const MfgSolution& sol) {
    std::string hist;
    for (double r : sol.residual_history) hist += (hist.empty() ? "" : " ") + format_double(r);
    rep.notes.push_back("outer iterations: " + std::to_string(sol.iterations) + (sol.converged ? " (converged)" : ""));
    rep.notes.push_back("residual history: " + hist);
}

int solver_status(const MfgSolution& sol, std::ostream& err) {
    if (sol.iterations == 0) {
        err << "mfgsolve: fixed point not attempted (max_outer = 0)\n";
        return solver_failure;
    }
    if (!sol.converged) {
        err << "mfgsolve: fixed point did not converge after " << sol.iterations
            << " iterations (residual " << format_double(sol.residual_history.back()) << ")\n";
        return solver_failure;
    }
    return ok;
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
    const MfgConfig cfg = parse_config(o.config);
    const MfgProblem problem = make_problem(cfg);
    const MfgSolution sol = mfg_solve_finite(problem);
    const RunRecord record = build_record(sol, psi_star_for(cfg, problem), config_hash(cfg));
    Report rep;
    if (sol.iterations > 0) rep.checks.push_back(check_fixed_point(sol, cfg.scheme.tol_fp));
    note_iterations(rep, sol);
    write_bundle(o.out, cfg, record, rep);
    emit(out, rep);
    return solver_status(sol, err);
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const MfgConfig cfg = parse_config(o.config);
    if (o.horizons.empty()) throw ConfigError("--horizons", "sweep needs a comma-separated list of horizons");
    const std::vector<double> hs = parse_horizons(o.horizons);
    for (double T : hs) {
        MfgConfig c = cfg;
        c.T = T;
        std::erase_if(c.scheme.snapshot_times, [T](double t) { return t > T; });
        try {
            c.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("--horizons", "horizon " + format_double(T) + ": " + e.what());
        }
    }
    const MfgProblem base = make_problem(cfg);
    const ScalarField psi_star = psi_star_for(cfg, base);
    const HorizonSweepResult res = mfg_solve_horizon_sweep(base, hs);

    Report rep;
    int status = ok;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const MfgSolution& sol = res.solutions[i];
        MfgConfig c = cfg;
        c.T = hs[i];
        std::erase_if(c.scheme.snapshot_times, [&c](double t) { return t > c.T; });
        const RunRecord record = build_record(sol, psi_star, config_hash(c));
        const fs::path dir = fs::path(o.out) / ("T_" + format_double(hs[i]));
        write_text(dir / "config.ini", serialize_config(c));
        write_record(dir, record);
        CheckLine line = check_fixed_point(sol, cfg.scheme.tol_fp);
        line.name += ".T_" + format_double(hs[i]);
        rep.checks.push_back(line);
        if (sol.iterations == 0 || !sol.converged) status = solver_failure;
    }
    rep.notes.push_back("comparison window: [0, " + format_double(res.window_end) + "]");
    for (std::size_t i = 0; i < res.rho_discrepancy.size(); ++i) {
        rep.notes.push_back("T=" + format_double(hs[i]) + " vs T=" + format_double(hs[i + 1]) +
                            ": rho discrepancy " + format_double(res.rho_discrepancy[i]) + ", phi discrepancy " +
                            format_double(res.phi_discrepancy[i]));
    }
    const ScalarField diff = res.solutions.back().phi.front() - psi_star;
    rep.notes.push_back("|phi(0) - Psi|_inf at largest horizon: " + format_double(diff.max_abs()));
    write_text(fs::path(o.out) / "config.ini", serialize_config(cfg));
    write_text(fs::path(o.out) / "report.txt", report_text(rep));
    emit(out, rep);
    for (const auto& n : rep.notes) out << "NOTE " << n << '\n';
    if (status != ok) err << "mfgsolve: at least one horizon did not reach the fixed point\n";
    return status;
}

double interpolate_1d(const ScalarField& f, double x) {
    const Grid& g = f.grid();
    const double s = x / g.h(0);
    const auto i = std::min(static_cast<std::size_t>(std::floor(s)), g.size() - 2);
    const double w = s - static_cast<double>(i);
    return (1.0 - w) * f[i] + w * f[i + 1];
}

int cmd_stationary(const Options& o, std::ostream& out, std::ostream&) {
    const MfgConfig cfg = parse_config(o.config);
    const Grid g = cfg.grid.make();
    const StationaryResult res = stationary_solve(StationaryProblem{g, cfg.nu, cfg.kappa.at_zero(),
                                                                    cfg.scheme.stationary_tol,
                                                                    cfg.scheme.stationary_max_time, 0.0});
    Report rep;
    rep.notes.push_back("pseudo-time " + format_double(res.pseudo_time) + " in " + std::to_string(res.steps) +
                        " steps of " + format_double(res.dt) + ", final residual " + format_double(res.residual));
    rep.notes.push_back("|Psi|_inf = " + format_double(res.psi.max_abs()));
    if (g.dim() == 1) {
        const double xc = 0.5 * g.length(0);
        const double numeric = interpolate_1d(res.psi, xc);
        const double exact = stationary_closed_form(xc, g.length(0), cfg.nu, cfg.kappa.at_zero());
        out << "COMPARE psi(L/2) numeric=" << format_double(numeric) << " closed_form=" << format_double(exact)
            << " abs_error=" << format_double(std::abs(numeric - exact)) << '\n';
        rep.notes.push_back("psi(L/2): numeric " + format_double(numeric) + ", closed form " + format_double(exact));
        if (wants(cfg, "stationary_oracle")) {
            rep.checks.push_back(
                check_stationary_oracle(res.psi, cfg.nu, cfg.kappa.at_zero(), cfg.diagnostics.stationary_err_factor));
        }
    }
    write_text(fs::path(o.out) / "config.ini", serialize_config(cfg));
    write_text(fs::path(o.out) / "stationary.csv", fields_csv({"psi"}, {&res.psi}));
    write_text(fs::path(o.out) / "report.txt", report_text(rep));
    emit(out, rep);
    return rep.all_pass() ? ok : diagnostic_failure;
}

int cmd_fp(const Options& o, std::ostream& out, std::ostream&) {
    const MfgConfig cfg = parse_config(o.config);
    const Grid g = cfg.grid.make();
    FpProblem p;
    p.nu = cfg.nu;
    p.rho0 = cfg.rho0.make(g);
    p.drift = constant_drift(cfg.drift.make(g));
    p.t_end = cfg.T;
    p.dt = cfg.scheme.dt;
    const FpTrajectory traj = fp_solve(p, cfg.scheme.snapshot_times);
    const ScalarField zero(g);
    const RunRecord record =
        build_record(traj.times, traj.rho, {}, {}, zero, {}, traj.snapshot_steps, config_hash(cfg));
    Report rep;
    rep.checks.push_back(check_mass_monotone(record));
    rep.checks.push_back(check_positivity(traj.rho, cfg.diagnostics.rho_lower_tol));
    write_bundle(o.out, cfg, record, rep);
    emit(out, rep);
    return rep.all_pass() ? ok : diagnostic_failure;
}

int cmd_hjb(const Options& o, std::ostream& out, std::ostream&) {
    const MfgConfig cfg = parse_config(o.config);
    const MfgProblem problem = make_problem(cfg);
    const Grid& g = problem.grid;
    HjbProblem p;
    p.nu = cfg.nu;
    p.K = constant_coefficient(ScalarField(g, cfg.kappa.at_zero()));
    p.psi = problem.psi;
    p.T = cfg.T;
    p.dt = cfg.scheme.dt;
    HjbSolveOptions opts;
    opts.check_bounds = false;
    const HjbTrajectory traj = hjb_solve(p, cfg.scheme.snapshot_times, opts);
    const std::vector<ScalarField> rho(traj.times.size(), ScalarField(g));
    const RunRecord record = build_record(traj.times, rho, traj.phi, {}, psi_star_for(cfg, problem), {},
                                          traj.snapshot_steps, config_hash(cfg));
    Report rep;
    rep.checks.push_back(check_phi_bounds(traj.phi, torsion_solve(cfg.nu, g), problem.psi.max_abs(),
                                          cfg.diagnostics.phi_lower_tol, cfg.diagnostics.phi_upper_tol));
    write_bundle(o.out, cfg, record, rep);
    emit(out, rep);
    return rep.all_pass() ? ok : diagnostic_failure;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    const MfgConfig cfg = parse_config(o.config);
    const MfgProblem problem = make_problem(cfg);
    const MfgSolution sol = mfg_solve_finite(problem);
    const ScalarField psi_star = psi_star_for(cfg, problem);
    const RunRecord record = build_record(sol, psi_star, config_hash(cfg));
    Report rep = verify_battery(cfg, sol, record, psi_star);
    note_iterations(rep, sol);
    write_bundle(o.out, cfg, record, rep);
    emit(out, rep);
    const int status = solver_status(sol, err);
    if (status != ok) return status;
    return rep.all_pass() ? ok : diagnostic_failure;
}

int cmd_convergence(const Options& o, std::ostream& out, std::ostream& err) {
    const MfgConfig cfg = parse_config(o.config);
    if (o.levels < 2) throw ConfigError("--levels", "must be >= 2");
    std::string csv = "level,nx,ny,dt,iterations,fp_residual,identity_residual";
    csv += cfg.grid.dim == 1 ? ",stationary_error\n" : "\n";
    Report rep;
    int status = ok;
    double prev_identity = 0.0;
    for (int l = 0; l < o.levels; ++l) {
        MfgConfig c = cfg;
        const int f = 1 << l;
        c.grid.nx = (cfg.grid.nx + 1) * f - 1;
        c.grid.ny = (cfg.grid.ny + 1) * f - 1;
        c.scheme.dt = cfg.scheme.dt / f;
        c.validate();
        const MfgProblem problem = make_problem(c);
        const MfgSolution sol = mfg_solve_finite(problem);
        if (sol.iterations == 0 || !sol.converged) status = solver_failure;
        const ScalarField zero(problem.grid);
        const RunRecord record = build_record(sol, zero, config_hash(c));
        const double m0 = record.mass.front() > 0.0 ? record.mass.front() : 1.0;
        const double identity = rho_phi_identity_residual(record) / m0;
        csv += std::to_string(l) + "," + std::to_string(c.grid.nx) + "," +
               std::to_string(c.grid.dim == 2 ? c.grid.ny : 0) + "," + format_double(c.scheme.dt) + "," +
               std::to_string(sol.iterations) + "," +
               format_double(sol.residual_history.empty() ? 0.0 : sol.residual_history.back()) + "," +
               format_double(identity);
        if (c.grid.dim == 1) {
            const ScalarField psi = stationary_for(c);
            double e = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                const double x = problem.grid.position(i)[0];
                e = std::max(e, std::abs(psi[i] - stationary_closed_form(x, c.grid.lx, c.nu, c.kappa.at_zero())));
            }
            csv += "," + format_double(e);
        }
        csv += '\n';
        if (l > 0) {
            rep.notes.push_back("level " + std::to_string(l) + ": identity residual ratio " +
                                format_double(identity / prev_identity));
        }
        prev_identity = identity;
    }
    write_text(fs::path(o.out) / "config.ini", serialize_config(cfg));
    write_text(fs::path(o.out) / "convergence.csv", csv);
    write_text(fs::path(o.out) / "report.txt", report_text(rep));
    out << csv;
    if (status != ok) err << "mfgsolve: a refinement level did not reach the fixed point\n";
    return status;
}

}  // namespace

Report verify_battery(const MfgConfig& cfg, const MfgSolution& sol, const RunRecord& record,
                      const ScalarField& psi_star) {
    const auto& d = cfg.diagnostics;
    const Grid& g = psi_star.grid();
    Report rep;
    for (const auto& name : d.checks) {
        if (name == "fixed_point") {
            rep.checks.push_back(check_fixed_point(sol, cfg.scheme.tol_fp));
        } else if (name == "velocity_selection") {
            const double tol = 2.0 * cfg.kappa.sup() * sol.grad_floor + 1e-12;
            rep.append(check_velocity_selection(sol, cfg.kappa, tol));
        } else if (name == "mass_monotone") {
            rep.checks.push_back(check_mass_monotone(record));
        } else if (name == "positivity") {
            rep.checks.push_back(check_positivity(sol.rho, d.rho_lower_tol));
        } else if (name == "phi_bounds") {
            rep.checks.push_back(check_phi_bounds(sol.phi, torsion_solve(cfg.nu, g), sol.phi.back().max_abs(),
                                                  d.phi_lower_tol, d.phi_upper_tol));
        } else if (name == "rho_phi_identity") {
            rep.checks.push_back(check_rho_phi_identity(record, d.identity_tol));
        } else if (name == "long_time") {
            LongTimeOptions lo;
            lo.t_end = d.window_fraction * cfg.T;
            lo.rho_tol = d.rho_decay_tol;
            lo.phi_tol = d.phi_decay_tol;
            lo.h1_factor = d.h1_factor;
            lo.r2_min = d.r2_min;
            rep.append(check_long_time(record, lo));
        } else if (name == "regularization") {
            for (auto kernel : {RegularizationKernel::fokker_planck, RegularizationKernel::linearized_hjb}) {
                RegularizationSetup s;
                s.kernel = kernel;
                s.nu = cfg.nu;
                s.field = sol.V.front();
                const ScalarField rho0 = sol.rho.front();
                s.u0 = kernel == RegularizationKernel::fokker_planck && rho0.max_abs() > 0.0 ? rho0 : sine_mode(g);
                s.p = d.reg_p;
                s.t1 = d.reg_t1;
                s.t2 = d.reg_t2;
                s.a = d.reg_a;
                s.dt = cfg.scheme.dt;
                s.tol_lin = d.reg_tol_lin;
                s.cap = d.reg_cap;
                rep.append(check_regularization(s).report);
            }
        } else if (name == "stationary_oracle") {
            rep.checks.push_back(check_stationary_oracle(stationary_for(cfg), cfg.nu, cfg.kappa.at_zero(),
                                                         d.stationary_err_factor));
        } else {
            throw ConfigError("[diagnostics].checks", "unknown check '" + name + "'");
        }
    }
    return rep;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-difference solver for the minimal-time exit mean field game", "mfgsolve"};
    app.require_subcommand(1);
    Options o;

    const auto common = [&o](CLI::App* sc) {
        sc->add_option("--config", o.config, "INI configuration file")->required();
        sc->add_option("--out", o.out, "output directory")->capture_default_str();
        sc->add_option("--seed", o.seed, "ignored; every run is deterministic");
        return sc;
    };
    auto* run = common(app.add_subcommand("run", "finite-horizon MFG solve"));
    auto* sweep = common(app.add_subcommand("sweep", "horizon sweep"));
    sweep->add_option("--horizons", o.horizons, "comma-separated increasing horizons")->required();
    auto* stationary = common(app.add_subcommand("stationary", "stationary value function Psi"));
    auto* fp = common(app.add_subcommand("fp", "standalone Fokker-Planck with the configured drift"));
    auto* hjb = common(app.add_subcommand("hjb", "standalone HJB with K = kappa(0)"));
    auto* verify = common(app.add_subcommand("verify", "MFG solve plus the configured diagnostics"));
    auto* conv = common(app.add_subcommand("convergence", "simultaneous (dt, h) refinement study"));
    conv->add_option("--levels", o.levels, "number of refinement levels")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : config_error;
    }

    try {
        if (run->parsed()) return cmd_run(o, out, err);
        if (sweep->parsed()) return cmd_sweep(o, out, err);
        if (stationary->parsed()) return cmd_stationary(o, out, err);
        if (fp->parsed()) return cmd_fp(o, out, err);
        if (hjb->parsed()) return cmd_hjb(o, out, err);
        if (verify->parsed()) return cmd_verify(o, out, err);
        if (conv->parsed()) return cmd_convergence(o, out, err);
    } catch (const ConfigError& e) {
        err << "mfgsolve: config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        err << "mfgsolve: " << e.what() << '\n';
        return solver_failure;
    }
    return config_error;
}

int run_cli(int argc, const char* const* argv) { return run_cli(argc, argv, std::cout, std::cerr); }

}  // namespace mfg::cli
