#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/error.hpp"
#include "mfg/grid.hpp"
#include "mfg/operators.hpp"
#include "oracles.hpp"

using namespace mfg;
using oracle::pi;

TEST_CASE("grid spacing and node layout") {
    const Grid g = Grid::line(2.0, 9);
    CHECK(g.h(0) == doctest::Approx(0.2));
    CHECK(g.size() == 11);
    CHECK(g.interior_size() == 9);
    CHECK(g.is_boundary(0));
    CHECK(g.is_boundary(10));
    CHECK_FALSE(g.is_boundary(5));

    const Grid r = Grid::rect(1.0, 2.0, 3, 4);
    CHECK(r.size() == 5 * 6);
    CHECK(r.interior_size() == 12);
    CHECK(r.index(2, 3) == 2 + 5 * 3);
    CHECK(r.multi_index(r.index(2, 3)) == std::array<int, 2>{2, 3});
    CHECK(r.position(r.index(1, 2))[1] == doctest::Approx(0.8));
    CHECK(r.cell_volume() == doctest::Approx(0.25 * 0.4));
}

TEST_CASE("grid rejects degenerate input") {
    CHECK_THROWS_AS(Grid::line(1.0, 2), PreconditionError);
    CHECK_THROWS_AS(Grid::line(0.0, 10), PreconditionError);
    CHECK_THROWS_AS(Grid::rect(1.0, -1.0, 5, 5), PreconditionError);
    CHECK_THROWS_AS(ScalarField(Grid::line(1.0, 3), std::vector<double>(4)), GridMismatch);
}

TEST_CASE("laplacian of zero and of a quadratic") {
    const Grid g = Grid::line(1.0, 20);
    CHECK(laplacian(ScalarField(g)).max_abs() == 0.0);

    const ScalarField q = ScalarField::sample(g, [](double x, double) { return x * (1.0 - x) / 2.0; });
    const ScalarField lap = laplacian(q);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(lap[i] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(lap[0] == 0.0);
    CHECK(lap[g.size() - 1] == 0.0);
}

TEST_CASE("laplacian of a sine mode converges at second order") {
    auto err = [](int n) {
        const Grid g = Grid::line(1.0, n);
        const ScalarField f = oracle::sine_mode(g);
        const ScalarField lap = laplacian(f);
        double e = 0.0;
        for (std::size_t i = 1; i + 1 < g.size(); ++i) e = std::max(e, std::abs(lap[i] + pi * pi * f[i]));
        return e;
    };
    const double order = std::log2(err(39) / err(79));
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("gradient examples") {
    const Grid g1 = Grid::line(1.0, 10);
    CHECK(gradient(ScalarField(g1, 3.0)).max_norm() == doctest::Approx(0.0));
    const ScalarField lin = ScalarField::sample(g1, [](double x, double) { return 2.5 * x; });
    const VectorField gl = gradient(lin);
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(gl.component(0)[i] == doctest::Approx(2.5));

    const Grid g2 = Grid::rect(1.0, 1.0, 6, 7);
    const VectorField gp = gradient(ScalarField::sample(g2, [](double x, double y) { return x + 2.0 * y; }));
    for (std::size_t i = 0; i < g2.size(); ++i) {
        if (g2.is_boundary(i)) continue;
        CHECK(gp.component(0)[i] == doctest::Approx(1.0));
        CHECK(gp.component(1)[i] == doctest::Approx(2.0));
    }
}

TEST_CASE("upwind gradient picks the side by direction sign and is first order") {
    const Grid g = Grid::line(1.0, 9);
    const ScalarField f = ScalarField::sample(g, [](double x, double) { return x * x; });
    VectorField dir(g);
    for (auto& d : dir.component(0)) d = 1.0;
    const double h = g.h(0);
    const std::size_t i = 4;
    CHECK(gradient_upwind(f, dir).component(0)[i] == doctest::Approx((f[i] - f[i - 1]) / h));
    for (auto& d : dir.component(0)) d = -1.0;
    CHECK(gradient_upwind(f, dir).component(0)[i] == doctest::Approx((f[i + 1] - f[i]) / h));

    auto err = [](int n) {
        const Grid gg = Grid::line(1.0, n);
        const ScalarField s = oracle::sine_mode(gg);
        VectorField d(gg);
        for (auto& x : d.component(0)) x = 1.0;
        const VectorField up = gradient_upwind(s, d);
        double e = 0.0;
        for (std::size_t k = 1; k + 1 < gg.size(); ++k) {
            e = std::max(e, std::abs(up.component(0)[k] - pi * std::cos(pi * gg.position(k)[0])));
        }
        return e;
    };
    const double order = std::log2(err(39) / err(79));
    CHECK(order > 0.7);
    CHECK(order < 1.3);

    CHECK_THROWS_AS(gradient_upwind(f, VectorField(Grid::line(1.0, 5))), GridMismatch);
}

TEST_CASE("godunov gradient norm") {
    const Grid g = Grid::line(1.0, 9);
    const ScalarField lin = ScalarField::sample(g, [](double x, double) { return 3.0 * x; });
    const ScalarField n = godunov_gradient_norm(lin);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(n[i] == doctest::Approx(3.0));
    // At a strict local maximum both one-sided slopes count: the steeper one wins.
    ScalarField peak(g);
    peak[5] = 1.0;
    peak[4] = 0.5;
    CHECK(godunov_gradient_norm(peak)[5] == doctest::Approx(1.0 / g.h(0)));
    // At a strict local minimum neither side is upwind: the norm is 0.
    ScalarField valley(g, 1.0);
    valley[5] = 0.0;
    CHECK(godunov_gradient_norm(valley)[5] == 0.0);
}

TEST_CASE("integrate examples") {
    const Grid g = Grid::line(1.0, 99);
    ScalarField one(g, 1.0);
    one.zero_boundary();
    CHECK(integrate(one) == doctest::Approx(0.99).epsilon(1e-14));
    CHECK(integrate(ScalarField(g)) == 0.0);
    const double e = std::abs(integrate(oracle::sine_mode(g)) - 2.0 / pi);
    const double e2 = std::abs(integrate(oracle::sine_mode(Grid::line(1.0, 199))) - 2.0 / pi);
    CHECK(e < 1e-4);
    CHECK(std::log2(e / e2) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("discrete norms") {
    const Grid g = Grid::line(1.0, 99);
    const Norms z = discrete_norms(ScalarField(g));
    CHECK(z.l1 == 0.0);
    CHECK(z.l2 == 0.0);
    CHECK(z.linf == 0.0);
    CHECK(z.h1_seminorm == 0.0);

    auto h1_err = [](int n) {
        const Norms s = discrete_norms(oracle::sine_mode(Grid::line(1.0, n)));
        return std::abs(s.h1_seminorm * s.h1_seminorm - pi * pi / 2.0);
    };
    CHECK(h1_err(99) < 1e-2);
    CHECK(std::log2(h1_err(99) / h1_err(199)) > 1.7);

    std::mt19937_64 rng(7);
    const Grid g2 = Grid::rect(1.0, 1.5, 8, 11);
    for (int trial = 0; trial < 20; ++trial) {
        const ScalarField f = oracle::random_field(g2, rng);
        const double c = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
        const Norms a = discrete_norms(f);
        const Norms b = discrete_norms(c * f);
        const double ac = std::abs(c);
        CHECK(b.l1 == doctest::Approx(ac * a.l1).epsilon(1e-12));
        CHECK(b.l2 == doctest::Approx(ac * a.l2).epsilon(1e-12));
        CHECK(b.linf == doctest::Approx(ac * a.linf).epsilon(1e-12));
        CHECK(b.h1_seminorm == doctest::Approx(ac * a.h1_seminorm).epsilon(1e-12));
    }
    CHECK_THROWS_AS(lp_norm(ScalarField(g), 0.5), PreconditionError);
}

TEST_CASE("property: laplacian and gradient are linear") {
    std::mt19937_64 rng(11);
    for (const Grid& g : {Grid::line(1.0, 17), Grid::rect(2.0, 1.0, 9, 6)}) {
        for (int trial = 0; trial < 25; ++trial) {
            ScalarField f = oracle::random_field(g, rng);
            ScalarField h = oracle::random_field(g, rng);
            std::uniform_real_distribution<double> u(-3.0, 3.0);
            f[0] = u(rng);  // nonzero boundary data too
            const double a = u(rng);
            const double b = u(rng);
            const ScalarField comb = a * f + b * h;
            const ScalarField lhs = laplacian(comb);
            const ScalarField rhs = a * laplacian(f) + b * laplacian(h);
            const double scale = 1.0 / (g.min_h() * g.min_h());
            CHECK(oracle::max_abs_diff(lhs, rhs) <= 1e-12 * scale * 10);
            const VectorField gl = gradient(comb);
            const VectorField gf = gradient(f);
            const VectorField gh = gradient(h);
            for (int k = 0; k < g.dim(); ++k) {
                for (std::size_t i = 0; i < g.size(); ++i) {
                    CHECK(std::abs(gl.component(k)[i] - a * gf.component(k)[i] - b * gh.component(k)[i]) <=
                          1e-11 / g.min_h());
                }
            }
        }
    }
}

TEST_CASE("property: laplacian is negative semidefinite with zero boundary") {
    std::mt19937_64 rng(12);
    for (const Grid& g : {Grid::line(1.0, 23), Grid::rect(1.0, 3.0, 7, 12)}) {
        for (int trial = 0; trial < 50; ++trial) {
            const ScalarField f = oracle::random_field(g, rng);
            CHECK(inner(f, laplacian(f)) <= 0.0);
        }
    }
}
