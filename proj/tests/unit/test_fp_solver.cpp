#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/config.hpp"
#include "mfg/error.hpp"
#include "mfg/fp_solver.hpp"
#include "mfg/operators.hpp"
#include "oracles.hpp"

using namespace mfg;
using oracle::pi;

namespace {

ScalarField bump(const Grid& g, double c = 0.5, double r = 0.25) {
    return DensitySpec{DensitySpec::Kind::bump, 1.0, c, c, r}.make(g);
}

VectorField constant_field(const Grid& g, double vx, double vy = 0.0) {
    VectorField v(g);
    for (auto& x : v.component(0)) x = vx;
    if (g.dim() == 2) {
        for (auto& y : v.component(1)) y = vy;
    }
    return v;
}

// Weak form of the FP equation tested against a smooth eta with compact
// support in (0.2, 0.8):
//   int rho_T eta - int rho_0 eta - sum_k dt int rho_{k+1} (nu eta'' + V eta').
double weak_residual(int n, double dt) {
    const double nu = 0.1;
    const double v = 0.3;
    const double T = 0.2;
    const Grid g = Grid::line(1.0, n);
    auto eta = [](double x) {
        if (x <= 0.2 || x >= 0.8) return std::array<double, 3>{0.0, 0.0, 0.0};
        const double a = pi / 0.6;
        const double s = std::sin(a * (x - 0.2));
        const double c = std::cos(a * (x - 0.2));
        return std::array<double, 3>{std::pow(s, 4), 4 * a * s * s * s * c,
                                     4 * a * a * (3 * s * s * c * c - s * s * s * s)};
    };
    ScalarField e(g), lhs_w(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto d = eta(g.position(i)[0]);
        e[i] = d[0];
        lhs_w[i] = nu * d[2] + v * d[1];
    }
    FpProblem p;
    p.nu = nu;
    p.rho0 = bump(g, 0.5, 0.3);
    p.drift = constant_drift(constant_field(g, v));
    p.t_end = T;
    p.dt = dt;
    const FpTrajectory traj = fp_solve(p);
    double acc = 0.0;
    for (std::size_t k = 1; k < traj.rho.size(); ++k) acc += dt * inner(traj.rho[k], lhs_w);
    return std::abs(inner(traj.rho.back(), e) - inner(traj.rho.front(), e) - acc);
}

}  // namespace

TEST_CASE("fp_step of zero density is zero") {
    const Grid g = Grid::line(1.0, 20);
    CHECK(fp_step(ScalarField(g), constant_field(g, 0.5), 0.1, 0.01).max_abs() == 0.0);
}

TEST_CASE("eigenmode decays at the implicit-Euler discrete rate") {
    for (const Grid& g : {Grid::line(1.0, 99), Grid::rect(1.0, 1.0, 31, 31)}) {
        const double nu = 0.1;
        const double dt = 1e-3;
        double lambda = 0.0;
        for (int k = 0; k < g.dim(); ++k) lambda += oracle::discrete_eigenvalue(g.h(k), g.length(k));
        const double mu = 1.0 / (1.0 + nu * dt * lambda);
        const FpStepper stepper(g, nu, dt);
        const VectorField zero(g);
        const ScalarField e = oracle::sine_mode(g);
        ScalarField rho = e;
        for (int k = 1; k <= 50; ++k) {
            const ScalarField next = stepper.step(rho, zero);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (std::abs(rho[i]) > 1e-3) CHECK(next[i] / rho[i] == doctest::Approx(mu).epsilon(1e-10));
            }
            rho = next;
        }
    }
}

TEST_CASE("one step versus two half steps differs at second order in dt") {
    // nu dt / h^2 kept well below 1 so the local error is in its asymptotic regime.
    const Grid g = Grid::line(1.0, 49);
    const ScalarField rho = bump(g, 0.5, 0.35);
    const VectorField v = constant_field(g, 0.4);
    auto diff = [&](double dt) {
        const ScalarField one = fp_step(rho, v, 0.1, dt);
        const ScalarField two = fp_step(fp_step(rho, v, 0.1, dt / 2), v, 0.1, dt / 2);
        return oracle::max_abs_diff(one, two);
    };
    const double ratio = diff(2e-4) / diff(1e-4);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("fp_solve of zero initial density") {
    const Grid g = Grid::line(1.0, 30);
    FpProblem p;
    p.nu = 0.1;
    p.rho0 = ScalarField(g);
    p.drift = constant_drift(constant_field(g, 0.2));
    p.t_end = 0.5;
    p.dt = 0.01;
    const std::vector<double> snaps{0.1, 0.5};
    const FpTrajectory t = fp_solve(p, snaps);
    for (double m : t.mass) CHECK(m == 0.0);
    REQUIRE(t.snapshot_steps.size() == 2);
    for (auto k : t.snapshot_steps) CHECK(t.rho[k].max_abs() == 0.0);
}

TEST_CASE("eigenmode mass follows the heat decay") {
    const Grid g = Grid::line(1.0, 99);
    const double nu = 0.1;
    const double dt = 1e-3;
    FpProblem p;
    p.nu = nu;
    p.rho0 = oracle::sine_mode(g);
    p.drift = constant_drift(VectorField(g));
    p.t_end = 1.0;
    p.dt = dt;
    const FpTrajectory t = fp_solve(p);
    const double mu = 1.0 / (1.0 + nu * dt * oracle::discrete_eigenvalue(g.h(0), 1.0));
    for (std::size_t k = 0; k < t.times.size(); k += 100) {
        CHECK(t.mass[k] == doctest::Approx(t.mass[0] * std::pow(mu, static_cast<double>(k))).epsilon(1e-10));
        const double analytic = (2.0 / pi) * std::exp(-nu * pi * pi * t.times[k]);
        CHECK(t.mass[k] == doctest::Approx(analytic).epsilon(1e-3));
    }
}

TEST_CASE("inward drift delays absorption") {
    const Grid g = Grid::line(1.0, 99);
    FpProblem p;
    p.nu = 0.1;
    p.rho0 = bump(g);
    p.drift = constant_drift(VectorField(g));
    p.t_end = 1.0;
    p.dt = 1e-3;
    const FpTrajectory still = fp_solve(p);
    p.drift = constant_drift(DriftSpec{DriftSpec::Kind::inward, 0, 0, 0.5}.make(g));
    const FpTrajectory inward = fp_solve(p);
    for (std::size_t k = 0; k < still.mass.size(); ++k) CHECK(inward.mass[k] >= still.mass[k] - 1e-15);
    CHECK(inward.mass.back() > still.mass.back());
}

TEST_CASE("property: positivity, mass decay and zero boundary under CFL") {
    std::mt19937_64 rng(31);
    for (const Grid& g : {Grid::line(1.0, 40), Grid::rect(1.0, 1.0, 15, 20)}) {
        for (int trial = 0; trial < 10; ++trial) {
            const double dt = 2e-3;
            // Bound |V_k| so that dt * sum_k |V_k| / h_k <= 1.
            double inv = 0.0;
            for (int k = 0; k < g.dim(); ++k) inv += 1.0 / g.h(k);
            const double vmax = 0.99 / (dt * inv);
            const FpStepper stepper(g, 0.05, dt);
            ScalarField rho = oracle::random_field(g, rng, 0.0, 1.0);
            double mass = integrate(rho);
            const double m0 = mass;
            for (int k = 0; k < 40; ++k) {
                VectorField v(g);
                std::uniform_real_distribution<double> u(-vmax, vmax);
                for (int a = 0; a < g.dim(); ++a) {
                    for (auto& x : v.component(a)) x = u(rng);
                }
                REQUIRE(stepper.cfl_ratio(v) <= 1.0);
                rho = stepper.step(rho, v);
                CHECK(rho.min() >= -1e-14);
                CHECK(rho.boundary_max_abs() == 0.0);
                const double m = integrate(rho);
                CHECK(m <= mass + 1e-13 * m0);
                mass = m;
            }
        }
    }
}

TEST_CASE("CFL violation is reported with its ratio") {
    const Grid g = Grid::line(1.0, 9);
    const FpStepper stepper(g, 0.1, 0.1);
    try {
        stepper.step(bump(g), constant_field(g, 2.0));
        FAIL("expected CflViolation");
    } catch (const CflViolation& e) {
        CHECK(e.ratio() == doctest::Approx(2.0));
    }
}

TEST_CASE("fp problem validation") {
    const Grid g = Grid::line(1.0, 9);
    FpProblem p;
    p.nu = 0.1;
    p.rho0 = bump(g);
    p.drift = constant_drift(VectorField(g));
    p.t_end = 1.0;
    p.dt = 0.1;
    CHECK_NOTHROW(p.validate());
    FpProblem q = p;
    q.rho0[3] = -1.0;
    CHECK_THROWS_AS(q.validate(), PreconditionError);
    q = p;
    q.rho0[0] = 0.5;
    CHECK_THROWS_AS(q.validate(), PreconditionError);
    q = p;
    q.nu = 0.0;
    CHECK_THROWS_AS(q.validate(), PreconditionError);
    q = p;
    q.dt = 0.3;
    CHECK_THROWS_AS(q.validate(), PreconditionError);
    const std::vector<double> off{0.15};
    CHECK_THROWS_AS(fp_solve(p, off), PreconditionError);
}

TEST_CASE("self-convergence in L1 is first order") {
    // Coarse nodes are a subset of the fine ones when n + 1 doubles.
    auto solve = [](int n, double dt) {
        const Grid g = Grid::line(1.0, n);
        FpProblem p;
        p.nu = 0.05;
        p.rho0 = bump(g, 0.4, 0.3);
        p.drift = constant_drift(constant_field(g, 0.5));
        p.t_end = 0.4;
        p.dt = dt;
        return fp_solve(p).rho.back();
    };
    auto l1_on_coarse = [](const ScalarField& coarse, const ScalarField& fine) {
        const int r = static_cast<int>((fine.size() - 1) / (coarse.size() - 1));
        double s = 0.0;
        for (std::size_t i = 0; i < coarse.size(); ++i) s += std::abs(coarse[i] - fine[r * i]);
        return s * coarse.grid().h(0);
    };
    const ScalarField a = solve(49, 4e-3);
    const ScalarField b = solve(99, 2e-3);
    const ScalarField c = solve(199, 1e-3);
    const double order = std::log2(l1_on_coarse(a, b) / l1_on_coarse(b, c));
    MESSAGE("observed L1 self-convergence order " << order);
    CHECK(order >= 0.7);
}

TEST_CASE("weak-form residual vanishes at first order under refinement") {
    const double r1 = weak_residual(49, 4e-3);
    const double r2 = weak_residual(99, 2e-3);
    const double r3 = weak_residual(199, 1e-3);
    MESSAGE("weak residuals " << r1 << " " << r2 << " " << r3);
    CHECK(r2 < 0.7 * r1);
    CHECK(r3 < 0.7 * r2);
}
