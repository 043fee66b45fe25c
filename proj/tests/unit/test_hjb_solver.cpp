#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/error.hpp"
#include "mfg/hjb_solver.hpp"
#include "mfg/operators.hpp"
#include "oracles.hpp"

using namespace mfg;
using oracle::pi;

namespace {

ScalarField quadratic_torsion(const Grid& g, double nu) {
    return ScalarField::sample(g, [&](double x, double) { return oracle::torsion_1d(x, g.length(0), nu); });
}

ScalarField stationary(const Grid& g, double nu, double kappa0, double tol = 1e-12) {
    return stationary_solve(StationaryProblem{g, nu, kappa0, tol, 1e4, 0.0}).psi;
}

HjbTrajectory solve(const Grid& g, double nu, double kappa, const ScalarField& psi, double T, double dt,
                    bool check = true) {
    HjbProblem p;
    p.nu = nu;
    p.K = constant_coefficient(ScalarField(g, kappa));
    p.psi = psi;
    p.T = T;
    p.dt = dt;
    HjbSolveOptions o;
    o.check_bounds = check;
    return hjb_solve(p, {}, o);
}

}  // namespace

TEST_CASE("torsion quadratic is a fixed point when K = 0") {
    const Grid g = Grid::line(1.0, 50);
    const double nu = 0.2;
    const ScalarField phi = quadratic_torsion(g, nu);
    const ScalarField next = hjb_step_backward(phi, ScalarField(g), nu, 1e-2);
    CHECK(oracle::max_abs_diff(next, phi) <= 1e-12 * phi.max_abs());
}

TEST_CASE("source-only step from zero") {
    const Grid g = Grid::line(1.0, 30);
    const double dt = 1e-2;
    const ScalarField next = hjb_step_backward(ScalarField(g), ScalarField(g), 0.1, dt);
    CHECK(next.boundary_max_abs() == 0.0);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        CHECK(next[i] > 0.0);
        CHECK(next[i] <= dt * (1.0 + 1e-14));
    }
}

TEST_CASE("stationary solution is a fixed point of the step") {
    const Grid g = Grid::line(1.0, 99);
    const double nu = 0.1;
    const double kappa = 1.0;
    const double tol = 1e-12;
    const ScalarField psi = stationary(g, nu, kappa, tol);
    const double dt = 0.5 * hjb_max_dt(g, kappa);
    const ScalarField next = hjb_step_backward(psi, ScalarField(g, kappa), nu, dt);
    CHECK(oracle::max_abs_diff(next, psi) <= 10.0 * tol * dt);
}

TEST_CASE("long horizon with K = 0 and psi = 0 approaches the torsion function") {
    const Grid g = Grid::line(1.0, 49);
    const double nu = 0.5;
    const HjbTrajectory t = solve(g, nu, 0.0, ScalarField(g), 10.0, 1e-2);
    const ScalarField exact = quadratic_torsion(g, nu);
    CHECK(oracle::max_abs_diff(t.phi.front(), exact) <= 1e-9);
    // phi at t = T is the final datum.
    CHECK(t.phi.back().max_abs() == 0.0);
}

TEST_CASE("psi = Psi with K = kappa(0) stays put") {
    const Grid g = Grid::line(1.0, 79);
    const double nu = 0.1;
    const ScalarField psi = stationary(g, nu, 1.0);
    const HjbTrajectory t = solve(g, nu, 1.0, psi, 1.0, 1e-3);
    for (const auto& phi : t.phi) CHECK(oracle::max_abs_diff(phi, psi) <= 1e-9);
}

TEST_CASE("comparison: ordered final data give ordered solutions") {
    std::mt19937_64 rng(41);
    for (const Grid& g : {Grid::line(1.0, 39), Grid::rect(1.0, 1.0, 15, 15)}) {
        for (int trial = 0; trial < 5; ++trial) {
            const ScalarField lo = oracle::random_field(g, rng, 0.0, 1.0);
            const ScalarField extra = oracle::random_field(g, rng, 0.0, 0.5);
            const ScalarField hi = lo + extra;
            const ScalarField K = oracle::random_field(g, rng, 0.2, 1.0);
            HjbProblem p;
            p.nu = 0.1;
            p.K = constant_coefficient(K);
            p.T = 0.5;
            p.dt = 0.5 * hjb_max_dt(g, 1.0);
            p.dt = 0.5 / std::ceil(0.5 / p.dt);
            p.psi = hi;
            const HjbTrajectory a = hjb_solve(p);
            p.psi = lo;
            const HjbTrajectory b = hjb_solve(p);
            for (std::size_t k = 0; k < a.phi.size(); ++k) {
                for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.phi[k][i] >= b.phi[k][i] - 1e-12);
            }
        }
    }
}

TEST_CASE("stationary solver matches the closed form at first order") {
    auto err = [](int n) {
        const Grid g = Grid::line(1.0, n);
        const ScalarField psi = stationary(g, 0.1, 1.0);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            e = std::max(e, std::abs(psi[i] - oracle::stationary_1d(g.position(i)[0], 1.0, 0.1, 1.0)));
        }
        return e;
    };
    const double e1 = err(99);
    const double e2 = err(199);
    CHECK(e1 <= 2.0 * 0.01);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("closed form satisfies the stationary ODE") {
    // Finite differences of the oracle itself, away from the kink at L/2.
    const double nu = 0.1, kappa = 1.5, L = 1.0, d = 1e-4;
    for (double x : {0.05, 0.2, 0.4, 0.6, 0.93}) {
        const double f0 = oracle::stationary_1d(x, L, nu, kappa);
        const double fp = oracle::stationary_1d(x + d, L, nu, kappa);
        const double fm = oracle::stationary_1d(x - d, L, nu, kappa);
        const double lhs = -nu * (fp - 2 * f0 + fm) / (d * d) + kappa * std::abs((fp - fm) / (2 * d));
        CHECK(lhs == doctest::Approx(1.0).epsilon(1e-5));
    }
    CHECK(oracle::stationary_1d(0.0, L, nu, kappa) == 0.0);
    CHECK(std::abs(oracle::stationary_1d(L, L, nu, kappa)) < 1e-15);
}

TEST_CASE("faster agents exit sooner") {
    const Grid g = Grid::line(1.0, 99);
    const ScalarField slow = stationary(g, 0.1, 1.0);
    const ScalarField fast = stationary(g, 0.1, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(fast[i] <= slow[i] + 1e-12);
    CHECK(fast.max() < slow.max());
}

TEST_CASE("small diffusion approaches the distance function") {
    const Grid g = Grid::line(1.0, 399);
    const double nu = 0.005;
    const double kappa = 1.0;
    const ScalarField psi = stationary(g, nu, kappa);
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.position(i)[0];
        if (std::abs(x - 0.5) < 20.0 * nu / kappa) continue;  // kink layer at the center
        e = std::max(e, std::abs(psi[i] - std::min(x, 1.0 - x) / kappa));
    }
    CHECK(e <= 2.0 * nu / kappa + 2.0 * g.h(0));
}

TEST_CASE("stationary result does not depend on the pseudo-time step") {
    const Grid g = Grid::rect(1.0, 1.0, 23, 23);
    const double dt = 0.9 * hjb_max_dt(g, 1.0);
    const auto a = stationary_solve(StationaryProblem{g, 0.1, 1.0, 1e-12, 1e4, dt});
    const auto b = stationary_solve(StationaryProblem{g, 0.1, 1.0, 1e-12, 1e4, dt / 2});
    CHECK(oracle::max_abs_diff(a.psi, b.psi) <= 1e-9);
    CHECK(b.dt == dt / 2);
}

TEST_CASE("stationary solver reports non-convergence") {
    const Grid g = Grid::line(1.0, 49);
    try {
        stationary_solve(StationaryProblem{g, 0.1, 1.0, 1e-12, 0.05, 0.0});
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.residual() > 0.0);
    }
    CHECK_THROWS_AS(stationary_solve(StationaryProblem{g, 0.1, 0.0, 1e-12, 1.0, 0.0}), PreconditionError);
}

TEST_CASE("torsion oracle in 1D and 2D") {
    const Grid g = Grid::line(2.0, 63);
    const double nu = 0.3;
    const ScalarField phi = torsion_solve(nu, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double exact = oracle::torsion_1d(g.position(i)[0], 2.0, nu);
        CHECK(std::abs(phi[i] - exact) <= 1e-12 * std::max(exact, 1e-300) + 1e-300);
        CHECK(phi[i] >= 0.0);
    }
    CHECK(phi.boundary_max_abs() == 0.0);

    const Grid sq = Grid::rect(1.0, 1.0, 99, 99);
    const ScalarField p2 = torsion_solve(1.0, sq);
    const double center = p2[sq.index(50, 50)];
    const double series = oracle::torsion_square_series(0.5, 0.5, 1.0, 1.0);
    CHECK(series == doctest::Approx(0.07367).epsilon(1e-4));
    CHECK(center == doctest::Approx(series).epsilon(1e-3));
    CHECK(p2.min() >= 0.0);
    CHECK(p2.boundary_max_abs() == 0.0);
}

TEST_CASE("property: positivity and the torsion upper bound") {
    std::mt19937_64 rng(43);
    for (const Grid& g : {Grid::line(1.0, 31), Grid::rect(1.0, 2.0, 11, 17)}) {
        const double nu = 0.1;
        const ScalarField torsion = torsion_solve(nu, g);
        for (int trial = 0; trial < 5; ++trial) {
            const ScalarField psi = oracle::random_field(g, rng, 0.0, 2.0);
            std::vector<ScalarField> Ks;
            const double dt = 0.25 / std::ceil(0.25 / (0.9 * hjb_max_dt(g, 1.0)));
            const std::size_t n = static_cast<std::size_t>(std::llround(0.25 / dt));
            for (std::size_t k = 0; k <= n; ++k) Ks.push_back(oracle::random_field(g, rng, 0.0, 1.0));
            HjbProblem p;
            p.nu = nu;
            p.K = [&Ks](std::size_t k) -> const ScalarField& { return Ks[k]; };
            p.psi = psi;
            p.T = 0.25;
            p.dt = dt;
            HjbSolveOptions o;
            o.check_bounds = false;
            const HjbTrajectory t = hjb_solve(p, {}, o);
            for (const auto& phi : t.phi) {
                CHECK(phi.min() >= -1e-12);
                for (std::size_t i = 0; i < g.size(); ++i) CHECK(phi[i] <= torsion[i] + psi.max_abs() + 1e-8);
            }
        }
    }
}

TEST_CASE("property: larger speed gives a smaller value") {
    std::mt19937_64 rng(44);
    const Grid g = Grid::rect(1.0, 1.0, 13, 13);
    const double dt = 0.5 / std::ceil(0.5 / (0.9 * hjb_max_dt(g, 2.0)));
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField K2 = oracle::random_field(g, rng, 0.0, 1.0);
        const ScalarField K1 = K2 + oracle::random_field(g, rng, 0.0, 1.0);
        const ScalarField psi = oracle::random_field(g, rng, 0.0, 1.0);
        HjbProblem p;
        p.nu = 0.1;
        p.psi = psi;
        p.T = 0.5;
        p.dt = dt;
        p.K = constant_coefficient(K1);
        const HjbTrajectory a = hjb_solve(p);
        p.K = constant_coefficient(K2);
        const HjbTrajectory b = hjb_solve(p);
        for (std::size_t k = 0; k < a.phi.size(); ++k) {
            for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.phi[k][i] <= b.phi[k][i] + 1e-12);
        }
    }
}

TEST_CASE("horizon monotonicity from below and above, both converging to Psi") {
    const Grid g = Grid::line(1.0, 49);
    const double nu = 0.1, kappa = 1.0, dt = 5e-3;
    const ScalarField Psi = stationary(g, nu, kappa);
    ScalarField upper = torsion_solve(nu, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.is_boundary(i)) upper[i] += Psi.max();
    }
    std::vector<ScalarField> from_below, from_above;
    for (double T : {1.0, 2.0, 4.0, 8.0}) {
        from_below.push_back(solve(g, nu, kappa, ScalarField(g), T, dt).phi.front());
        from_above.push_back(solve(g, nu, kappa, upper, T, dt).phi.front());
    }
    for (std::size_t h = 1; h < from_below.size(); ++h) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(from_below[h][i] >= from_below[h - 1][i] - 1e-12);
            CHECK(from_above[h][i] <= from_above[h - 1][i] + 1e-12);
            CHECK(from_below[h][i] <= Psi[i] + 1e-9);
            CHECK(from_above[h][i] >= Psi[i] - 1e-9);
        }
        CHECK(oracle::max_abs_diff(from_below[h], Psi) < oracle::max_abs_diff(from_below[h - 1], Psi));
        CHECK(oracle::max_abs_diff(from_above[h], Psi) < oracle::max_abs_diff(from_above[h - 1], Psi));
    }
    CHECK(oracle::max_abs_diff(from_below.back(), Psi) < 1e-3 * Psi.max());
    CHECK(oracle::max_abs_diff(from_above.back(), Psi) < 1e-3 * Psi.max());
}

TEST_CASE("weak-form residual vanishes under refinement") {
    // int phi_0 eta - int psi eta = sum_k dt [ nu int phi_k eta'' - int K |grad phi_{k+1}| eta + int eta ]
    // with the centered gradient standing in for |grad phi|.
    auto residual = [](int n, double dt) {
        const Grid g = Grid::line(1.0, n);
        const double nu = 0.1, kappa = 1.0, T = 0.2;
        ScalarField eta(g), eta2(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.position(i)[0];
            if (x <= 0.2 || x >= 0.8) continue;
            const double a = pi / 0.6, s = std::sin(a * (x - 0.2)), c = std::cos(a * (x - 0.2));
            eta[i] = std::pow(s, 4);
            eta2[i] = 4 * a * a * (3 * s * s * c * c - s * s * s * s);
        }
        const ScalarField psi = 0.5 * oracle::sine_mode(g);
        const HjbTrajectory t = solve(g, nu, kappa, psi, T, dt);
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < t.phi.size(); ++k) {
            const VectorField grad = gradient(t.phi[k + 1]);
            ScalarField H(g);
            for (std::size_t i = 0; i < g.size(); ++i) H[i] = kappa * grad.norm_at(i);
            acc += dt * (nu * inner(t.phi[k], eta2) - inner(H, eta) + integrate(eta));
        }
        return std::abs(inner(t.phi.front(), eta) - inner(psi, eta) - acc);
    };
    const double r1 = residual(49, 4e-3);
    const double r2 = residual(99, 2e-3);
    const double r3 = residual(199, 1e-3);
    MESSAGE("hjb weak residuals " << r1 << " " << r2 << " " << r3);
    CHECK(r2 < 0.7 * r1);
    CHECK(r3 < 0.7 * r2);
}

TEST_CASE("hjb CFL and precondition errors") {
    const Grid g = Grid::line(1.0, 9);
    const HjbStepper s(g, 0.1, 0.5);
    CHECK_THROWS_AS(s.step(ScalarField(g), ScalarField(g, 1.0)), CflViolation);
    CHECK_THROWS_AS(s.step(ScalarField(g), ScalarField(g, -0.01)), PreconditionError);
    HjbProblem p;
    p.nu = 0.1;
    p.K = constant_coefficient(ScalarField(g));
    p.psi = ScalarField(g, 1.0);
    p.T = 1.0;
    p.dt = 0.1;
    CHECK_THROWS_AS(p.validate(), PreconditionError);  // nonzero boundary
}

TEST_CASE("linearized HJB step is linear and order preserving") {
    std::mt19937_64 rng(45);
    const Grid g = Grid::rect(1.0, 1.0, 12, 12);
    const double dt = 1e-2;
    const LinearizedHjbStepper s(g, 0.1, dt);
    const VectorField gv = oracle::random_vector(g, rng, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField a = oracle::random_field(g, rng, 0.0, 1.0);
        const ScalarField b = oracle::random_field(g, rng, 0.0, 1.0);
        CHECK(s.step(a, gv).min() >= -1e-15);
        const ScalarField lhs = s.step(2.0 * a + b, gv);
        const ScalarField rhs = 2.0 * s.step(a, gv) + s.step(b, gv);
        CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-13);
    }
}
