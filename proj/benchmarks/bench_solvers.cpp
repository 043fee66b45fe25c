#include <benchmark/benchmark.h>

#include <cmath>

#include "mfg/coupling.hpp"
#include "mfg/fp_solver.hpp"
#include "mfg/hjb_solver.hpp"

using namespace mfg;

namespace {

Grid grid_for(int dim, int n) { return dim == 1 ? Grid::line(1.0, n) : Grid::rect(1.0, 1.0, n, n); }

ScalarField sine_bump(const Grid& g) {
    ScalarField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.is_boundary(i)) continue;
        const auto p = g.position(i);
        f[i] = std::sin(M_PI * p[0]) * (g.dim() == 2 ? std::sin(M_PI * p[1]) : 1.0);
    }
    return f;
}

void BM_FpStep(benchmark::State& state) {
    const Grid g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const FpStepper stepper(g, 0.1, 0.5 * g.min_h());
    VectorField v(g);
    for (auto& x : v.component(0)) x = 0.5;
    ScalarField rho = sine_bump(g);
    for (auto _ : state) {
        rho = stepper.step(rho, v);
        benchmark::DoNotOptimize(rho[g.size() / 2]);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_FpStep)->Args({1, 199})->Args({1, 1599})->Args({2, 63})->Args({2, 199});

void BM_HjbStep(benchmark::State& state) {
    const Grid g = grid_for(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    const HjbStepper stepper(g, 0.1, 0.5 * hjb_max_dt(g, 1.0));
    const ScalarField K(g, 1.0);
    ScalarField phi = sine_bump(g);
    for (auto _ : state) {
        phi = stepper.step(phi, K);
        benchmark::DoNotOptimize(phi[g.size() / 2]);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_HjbStep)->Args({1, 199})->Args({1, 1599})->Args({2, 63})->Args({2, 199});

void BM_Stationary(benchmark::State& state) {
    const Grid g = Grid::line(1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const StationaryResult r = stationary_solve(StationaryProblem{g, 0.1, 1.0, 1e-11, 1e4, 0.0});
        benchmark::DoNotOptimize(r.psi[g.size() / 2]);
    }
}
BENCHMARK(BM_Stationary)->Arg(99)->Arg(199)->Unit(benchmark::kMillisecond);

void BM_MfgSolve(benchmark::State& state) {
    MfgConfig c;
    c.grid.nx = static_cast<int>(state.range(0));
    c.T = 1.0;
    c.kappa = KappaModel::affine(1.0, 2.0, 0.2);
    c.rho0.amplitude = 2.0;
    c.scheme.dt = 1e-3;
    const MfgProblem p = make_problem(c);
    int iterations = 0;
    for (auto _ : state) {
        const MfgSolution s = mfg_solve_finite(p);
        iterations = s.iterations;
        benchmark::DoNotOptimize(s.rho.back()[0]);
    }
    state.counters["outer_iterations"] = iterations;
}
BENCHMARK(BM_MfgSolve)->Arg(49)->Arg(99)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
