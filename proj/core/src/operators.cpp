#include "mfg/operators.hpp"

#include <algorithm>
#include <cmath>

#include "mfg/error.hpp"

namespace mfg {

namespace {

// Calls fn(flat_index, i, j) for every node.
template <typename Fn>
void for_each_node(const Grid& g, Fn&& fn) {
    const int ny = g.nodes(1);
    const int nx = g.nodes(0);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) fn(g.index(i, j), i, j);
    }
}

double quadrature_weight(const Grid& g, int i, int j) {
    double w = g.h(0);
    if (i == 0 || i == g.interior(0) + 1) w *= 0.5;
    if (g.dim() == 2) {
        w *= g.h(1);
        if (j == 0 || j == g.interior(1) + 1) w *= 0.5;
    }
    return w;
}

// Derivative along `axis` at a node whose index along that axis is `a`.
double centered_derivative(std::span<const double> v, std::size_t idx, std::size_t stride, int a, int last,
                           double h) {
    if (a == 0) return (-3.0 * v[idx] + 4.0 * v[idx + stride] - v[idx + 2 * stride]) / (2.0 * h);
    if (a == last) return (3.0 * v[idx] - 4.0 * v[idx - stride] + v[idx - 2 * stride]) / (2.0 * h);
    return (v[idx + stride] - v[idx - stride]) / (2.0 * h);
}

}  // namespace

ScalarField laplacian(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    auto v = f.values();
    for_each_node(g, [&](std::size_t idx, int, int) {
        if (g.is_boundary(idx)) return;
        double s = 0.0;
        for (int k = 0; k < g.dim(); ++k) {
            const std::size_t st = g.stride(k);
            const double h2 = g.h(k) * g.h(k);
            s += (v[idx + st] - 2.0 * v[idx] + v[idx - st]) / h2;
        }
        out[idx] = s;
    });
    return out;
}

VectorField gradient(const ScalarField& f) {
    const Grid& g = f.grid();
    VectorField out(g);
    auto v = f.values();
    for_each_node(g, [&](std::size_t idx, int i, int j) {
        const int along[2] = {i, j};
        for (int k = 0; k < g.dim(); ++k) {
            out.component(k)[idx] = centered_derivative(v, idx, g.stride(k), along[k], g.interior(k) + 1, g.h(k));
        }
    });
    return out;
}

VectorField gradient_upwind(const ScalarField& f, const VectorField& direction) {
    require_same_grid(f.grid(), direction.grid(), "gradient_upwind");
    const Grid& g = f.grid();
    VectorField out(g);
    auto v = f.values();
    for_each_node(g, [&](std::size_t idx, int i, int j) {
        const int along[2] = {i, j};
        for (int k = 0; k < g.dim(); ++k) {
            const std::size_t st = g.stride(k);
            const double h = g.h(k);
            const int last = g.interior(k) + 1;
            const double d = direction.component(k)[idx];
            double val;
            if (along[k] == 0) {
                val = (v[idx + st] - v[idx]) / h;
            } else if (along[k] == last) {
                val = (v[idx] - v[idx - st]) / h;
            } else if (d > 0.0) {
                val = (v[idx] - v[idx - st]) / h;
            } else if (d < 0.0) {
                val = (v[idx + st] - v[idx]) / h;
            } else {
                val = (v[idx + st] - v[idx - st]) / (2.0 * h);
            }
            out.component(k)[idx] = val;
        }
    });
    return out;
}

ScalarField godunov_gradient_norm(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    auto v = f.values();
    for_each_node(g, [&](std::size_t idx, int, int) {
        if (g.is_boundary(idx)) return;
        double s = 0.0;
        for (int k = 0; k < g.dim(); ++k) {
            const std::size_t st = g.stride(k);
            const double h = g.h(k);
            const double back = (v[idx] - v[idx - st]) / h;
            const double fwd = (v[idx] - v[idx + st]) / h;
            const double m = std::max({back, fwd, 0.0});
            s += m * m;
        }
        out[idx] = std::sqrt(s);
    });
    return out;
}

double integrate(const ScalarField& f) {
    const Grid& g = f.grid();
    double s = 0.0;
    for_each_node(g, [&](std::size_t idx, int i, int j) { s += quadrature_weight(g, i, j) * f[idx]; });
    return s;
}

double inner(const ScalarField& f, const ScalarField& g) {
    require_same_grid(f.grid(), g.grid(), "inner");
    const Grid& grid = f.grid();
    double s = 0.0;
    for_each_node(grid, [&](std::size_t idx, int i, int j) { s += quadrature_weight(grid, i, j) * f[idx] * g[idx]; });
    return s;
}

double lp_norm(const ScalarField& f, double p) {
    if (!(p >= 1.0)) throw PreconditionError("lp_norm: p must be >= 1");
    const Grid& g = f.grid();
    double s = 0.0;
    for_each_node(g, [&](std::size_t idx, int i, int j) {
        s += quadrature_weight(g, i, j) * std::pow(std::abs(f[idx]), p);
    });
    return std::pow(s, 1.0 / p);
}

double h1_seminorm(const ScalarField& f) {
    const Grid& g = f.grid();
    const VectorField grad = gradient(f);
    double s = 0.0;
    for_each_node(g, [&](std::size_t idx, int i, int j) {
        double q = 0.0;
        for (int k = 0; k < g.dim(); ++k) q += grad.component(k)[idx] * grad.component(k)[idx];
        s += quadrature_weight(g, i, j) * q;
    });
    return std::sqrt(s);
}

Norms discrete_norms(const ScalarField& f) {
    const Grid& g = f.grid();
    Norms n;
    double s1 = 0.0;
    double s2 = 0.0;
    for_each_node(g, [&](std::size_t idx, int i, int j) {
        const double w = quadrature_weight(g, i, j);
        const double a = std::abs(f[idx]);
        s1 += w * a;
        s2 += w * a * a;
    });
    n.l1 = s1;
    n.l2 = std::sqrt(s2);
    n.linf = f.max_abs();
    n.h1_seminorm = h1_seminorm(f);
    return n;
}

}  // namespace mfg
