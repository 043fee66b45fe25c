#include "mfg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfg/error.hpp"
#include "mfg/fp_solver.hpp"
#include "mfg/hjb_solver.hpp"
#include "mfg/operators.hpp"
#include "mfg/output.hpp"
#include "mfg/time_grid.hpp"

namespace mfg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

CheckLine make_check(std::string name, double value, double tol, bool pass) {
    return CheckLine{std::move(name), pass, value, tol};
}

// Index of the last sample with t <= t_end (+ round-off).
std::size_t last_index_before(std::span<const double> times, double t_end) {
    std::size_t k = 0;
    const double slack = 1e-9 * std::max(1.0, std::abs(t_end));
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= t_end + slack) k = i;
    }
    return k;
}

}  // namespace

bool Report::all_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.pass; });
}

void Report::append(Report other) {
    for (auto& c : other.checks) checks.push_back(std::move(c));
    for (auto& f : other.fits) fits.push_back(std::move(f));
    for (auto& n : other.notes) notes.push_back(std::move(n));
}

std::string format_check(const CheckLine& line) {
    return "CHECK " + line.name + (line.pass ? " PASS " : " FAIL ") + format_double(line.value) + " " +
           format_double(line.tolerance);
}

RateFit fit_exponential(std::span<const double> times, std::span<const double> series, double t_lo, double t_hi) {
    if (times.size() != series.size()) throw PreconditionError("fit_exponential: size mismatch");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t n = 0;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t_lo || times[i] > t_hi) continue;
        if (!(series[i] > 0.0) || !std::isfinite(series[i])) {
            throw PreconditionError("fit_exponential: non-positive sample at t = " + std::to_string(times[i]));
        }
        const double y = std::log(series[i]);
        pts.emplace_back(times[i], y);
        st += times[i];
        sy += y;
        ++n;
    }
    if (n < 2) throw PreconditionError("fit_exponential: fewer than 2 samples in the window");
    const double tm = st / static_cast<double>(n);
    const double ym = sy / static_cast<double>(n);
    for (const auto& [t, y] : pts) {
        stt += (t - tm) * (t - tm);
        sty += (t - tm) * (y - ym);
    }
    if (!(stt > 0.0)) throw PreconditionError("fit_exponential: degenerate time window");
    const double slope = sty / stt;
    const double intercept = ym - slope * tm;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const auto& [t, y] : pts) {
        const double e = y - (intercept + slope * t);
        ss_res += e * e;
        ss_tot += (y - ym) * (y - ym);
    }
    RateFit f;
    f.alpha = -slope;
    f.c = std::exp(intercept);
    f.t_lo = pts.front().first;
    f.t_hi = pts.back().first;
    f.r2 = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
    f.samples = n;
    return f;
}

std::optional<RateFit> fit_trailing(std::span<const double> times, std::span<const double> series, double t_end) {
    const std::size_t last = last_index_before(times, t_end);
    double reference = series.empty() ? 0.0 : series[0];
    if (!(reference > 0.0)) {
        for (std::size_t i = 0; i <= last && i < series.size(); ++i) reference = std::max(reference, series[i]);
    }
    const double threshold = 10.0 * kEps * reference;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i <= last && i < series.size(); ++i) {
        if (series[i] > threshold) keep.push_back(i);
    }
    if (keep.size() < 4) return std::nullopt;
    const std::size_t first = keep[keep.size() / 2];
    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t j = keep.size() / 2; j < keep.size(); ++j) {
        t.push_back(times[keep[j]]);
        y.push_back(series[keep[j]]);
    }
    return fit_exponential(t, y, times[first], times[keep.back()]);
}

double rho_phi_identity_residual(const RunRecord& record) {
    record.validate();
    const auto& t = record.times;
    if (t.size() < 3) throw PreconditionError("rho_phi identity: need at least 3 recorded times");
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
        const double dc = (record.coupling[k + 1] - record.coupling[k - 1]) / (t[k + 1] - t[k - 1]);
        worst = std::max(worst, std::abs(dc + record.mass[k]));
    }
    return worst;
}

CheckLine check_rho_phi_identity(const RunRecord& record, double tol) {
    const double value = rho_phi_identity_residual(record);
    const double scale = record.mass.front() > 0.0 ? record.mass.front() : 1.0;
    return make_check("rho_phi_identity", value / scale, tol, value <= tol * scale);
}

CheckLine check_mass_monotone(const RunRecord& record) {
    record.validate();
    const double m0 = record.mass.empty() ? 0.0 : record.mass.front();
    const double slack = 1e-12 * std::max(m0, 0.0);
    double worst = 0.0;
    for (std::size_t k = 1; k < record.mass.size(); ++k) {
        worst = std::max(worst, record.mass[k] - record.mass[k - 1]);
        worst = std::max(worst, record.mass[k] - m0);
    }
    return make_check("mass_monotone", worst, slack, worst <= slack);
}

Report check_long_time(const RunRecord& record, const LongTimeOptions& opt) {
    record.validate();
    Report rep;
    const std::size_t last = last_index_before(record.times, opt.t_end);
    const double rho0 = record.rho_linf.front();
    const double psi = record.psi_star_linf;

    const double rho_level = opt.rho_tol * rho0;
    rep.checks.push_back(make_check("long_time.rho_linf", record.rho_linf[last], rho_level,
                                    record.rho_linf[last] <= rho_level));
    const double phi_level = opt.phi_tol * psi;
    rep.checks.push_back(make_check("long_time.phi_linf", record.phierr_linf[last], phi_level,
                                    record.phierr_linf[last] <= phi_level));
    const double h1_level = opt.h1_factor * phi_level;
    rep.checks.push_back(make_check("long_time.phi_h1", record.phierr_h1[last], h1_level,
                                    record.phierr_h1[last] <= h1_level));

    // H1 seminorm non-increasing over the last quarter of the window.
    const double t_quarter = record.times[last] - 0.25 * (record.times[last] - record.times.front());
    double worst_rise = 0.0;
    const double rise_slack = 10.0 * kEps * std::max(record.phierr_h1.front(), 1.0);
    for (std::size_t k = 1; k <= last; ++k) {
        if (record.times[k - 1] < t_quarter) continue;
        worst_rise = std::max(worst_rise, record.phierr_h1[k] - record.phierr_h1[k - 1]);
    }
    rep.checks.push_back(make_check("long_time.phi_h1_monotone", worst_rise, rise_slack, worst_rise <= rise_slack));

    const auto fit_series = [&](const std::string& name, const std::vector<double>& series) {
        const auto fit = fit_trailing(record.times, series, opt.t_end);
        if (!fit) {
            rep.notes.push_back(name + ": series vanishes on the window, no rate to fit");
            return;
        }
        rep.fits.emplace_back(name, *fit);
        rep.checks.push_back(make_check(name + ".alpha_positive", fit->alpha, 0.0, fit->alpha > 0.0));
        rep.checks.push_back(make_check(name + ".r2", fit->r2, opt.r2_min, fit->r2 >= opt.r2_min));
        if (fit->alpha > 0.0 && fit->alpha * opt.t_end < 3.0) {
            rep.notes.push_back(name + ": horizon too short (alpha * t_end = " + format_double(fit->alpha * opt.t_end) +
                                " < 3)");
        }
    };
    fit_series("rho_linf", record.rho_linf);
    fit_series("phierr_linf", record.phierr_linf);
    return rep;
}

CheckLine check_positivity(std::span<const ScalarField> rho, double tol) {
    double lowest = 0.0;
    for (const auto& r : rho) lowest = std::min(lowest, r.min());
    return make_check("positivity", lowest, -tol, lowest >= -tol);
}

CheckLine check_phi_bounds(std::span<const ScalarField> phi, const ScalarField& torsion, double psi_linf,
                           double lower_tol, double upper_tol) {
    double worst_low = 0.0;
    double worst_high = -std::numeric_limits<double>::infinity();
    for (const auto& p : phi) {
        require_same_grid(p.grid(), torsion.grid(), "check_phi_bounds");
        worst_low = std::min(worst_low, p.min());
        for (std::size_t i = 0; i < p.size(); ++i) worst_high = std::max(worst_high, p[i] - torsion[i] - psi_linf);
    }
    const bool pass = worst_low >= -lower_tol && worst_high <= upper_tol;
    // Report the larger of the two normalized violations.
    const double value = std::max(-worst_low - lower_tol, worst_high - upper_tol);
    return make_check("phi_bounds", value, 0.0, pass);
}

Report check_velocity_selection(const MfgSolution& s, const KappaModel& kappa, double tol) {
    Report rep;
    double speed_excess = 0.0;
    double alignment = 0.0;
    for (std::size_t k = 0; k < s.V.size(); ++k) {
        const VectorField grad = gradient(s.phi[k]);
        const VectorField& v = s.V[k];
        for (std::size_t i = 0; i < v.grid().size(); ++i) {
            const double kap = kappa(s.rho[k][i]);
            speed_excess = std::max(speed_excess, v.norm_at(i) - kap);
            double dot = 0.0;
            for (int d = 0; d < v.dim(); ++d) dot += v.component(d)[i] * grad.component(d)[i];
            alignment = std::max(alignment, std::abs(dot + kap * grad.norm_at(i)));
        }
    }
    const double speed_tol = 1e-12 * kappa.sup();
    rep.checks.push_back(make_check("velocity_selection.speed", speed_excess, speed_tol, speed_excess <= speed_tol));
    rep.checks.push_back(make_check("velocity_selection.alignment", alignment, tol, alignment <= tol));
    return rep;
}

CheckLine check_fixed_point(const MfgSolution& s, double tol) {
    const double r = s.residual_history.empty() ? std::numeric_limits<double>::infinity() : s.residual_history.back();
    return make_check("fixed_point", r, tol, s.converged && r <= tol);
}

double stationary_closed_form(double x, double length, double nu, double kappa0) {
    const double y = std::min(x, length - x);
    const double a = kappa0 / nu;
    return y / kappa0 - (nu / (kappa0 * kappa0)) * (std::exp(a * (y - 0.5 * length)) - std::exp(-a * 0.5 * length));
}

CheckLine check_stationary_oracle(const ScalarField& psi, double nu, double kappa0, double factor) {
    const Grid& g = psi.grid();
    if (g.dim() != 1) throw PreconditionError("stationary oracle: closed form is 1D only");
    double err = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = g.position(i)[0];
        err = std::max(err, std::abs(psi[i] - stationary_closed_form(x, g.length(0), nu, kappa0)));
    }
    const double tol = factor * g.h(0);
    return make_check("stationary_oracle", err, tol, err <= tol);
}

RegularizationReport check_regularization(const RegularizationSetup& s) {
    const double gap = s.t2 - s.t1;
    if (!(s.a > 0.0 && s.a < 1.0) || !(gap > s.a && gap < 1.0 / s.a)) {
        throw PreconditionError("regularization: need a < t2 - t1 < 1/a");
    }
    if (!(s.t1 > 0.0)) throw PreconditionError("regularization: need t1 > 0");
    if (!(s.p > 1.0)) throw PreconditionError("regularization: need p > 1");
    if (s.u0.max_abs() == 0.0) throw PreconditionError("regularization: zero initial datum has degenerate norms");
    if (s.scales.empty()) throw PreconditionError("regularization: empty scaling family");
    require_same_grid(s.u0.grid(), s.field.grid(), "regularization");
    const std::size_t k2 = step_count(0.0, s.t2, s.dt);
    const std::size_t k1 = snapshot_steps(std::span<const double>(&s.t1, 1), 0.0, s.dt, k2).front();

    const Grid& g = s.u0.grid();
    std::optional<FpStepper> fp;
    std::optional<LinearizedHjbStepper> lin;
    if (s.kernel == RegularizationKernel::fokker_planck) {
        fp.emplace(g, s.nu, s.dt);
    } else {
        lin.emplace(g, s.nu, s.dt);
    }

    RegularizationReport out;
    for (double scale : s.scales) {
        ScalarField u = scale * s.u0;
        double at_t1 = 0.0;
        for (std::size_t k = 0; k < k2; ++k) {
            if (k == k1) at_t1 = lp_norm(u, s.p);
            u = fp ? fp->step(u, s.field) : lin->step(u, s.field);
        }
        if (k1 == k2) at_t1 = lp_norm(u, s.p);
        if (!(at_t1 > 0.0)) throw PreconditionError("regularization: |u(t1)|_p vanished");
        out.ratios.push_back(u.max_abs() / at_t1);
    }
    const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.spread = *hi / *lo - 1.0;
    const std::string prefix = s.kernel == RegularizationKernel::fokker_planck ? "regularization.fp" : "regularization.hjb";
    out.report.checks.push_back(make_check(prefix + ".linearity", out.spread, s.tol_lin, out.spread <= s.tol_lin));
    out.report.checks.push_back(
        make_check(prefix + ".cap", *hi, s.cap, std::isfinite(*hi) && *hi <= s.cap));
    out.report.notes.push_back(prefix + ": empirical constant R = " + format_double(*hi));
    return out;
}

}  // namespace mfg
