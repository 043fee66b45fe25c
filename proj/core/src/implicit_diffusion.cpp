#include "mfg/implicit_diffusion.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cmath>
#include <vector>

#include "mfg/error.hpp"

namespace mfg {

struct ShiftedLaplacianSolver::Impl {
    Grid grid;
    double alpha;
    double beta;

    // 1D: LU factors of the constant-coefficient tridiagonal matrix.
    std::vector<double> c_prime;
    std::vector<double> denom;
    double off = 0.0;

    // 2D: interior-node Cholesky.
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

    Impl(const Grid& g, double a, double b) : grid(g), alpha(a), beta(b) {}
};

ShiftedLaplacianSolver::ShiftedLaplacianSolver(const Grid& grid, double alpha, double beta)
    : impl_(std::make_unique<Impl>(grid, alpha, beta)) {
    if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha > 0.0 || beta > 0.0)) {
        throw PreconditionError("ShiftedLaplacianSolver: need alpha >= 0, beta >= 0, not both zero");
    }
    Impl& m = *impl_;
    if (grid.dim() == 1) {
        const int n = grid.interior(0);
        const double h2 = grid.h(0) * grid.h(0);
        const double diag = alpha + 2.0 * beta / h2;
        m.off = -beta / h2;
        m.c_prime.resize(n);
        m.denom.resize(n);
        double prev_c = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = diag - (i > 0 ? m.off * prev_c : 0.0);
            if (!(std::abs(d) > 0.0) || !std::isfinite(d)) throw LinearSolveError("tridiagonal factorization broke down");
            m.denom[i] = d;
            prev_c = m.off / d;
            m.c_prime[i] = prev_c;
        }
        return;
    }

    const int nx = grid.interior(0);
    const int ny = grid.interior(1);
    const double cx = beta / (grid.h(0) * grid.h(0));
    const double cy = beta / (grid.h(1) * grid.h(1));
    const auto unknown = [nx](int i, int j) { return (i - 1) + nx * (j - 1); };
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(nx) * ny * 5);
    for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            const int r = unknown(i, j);
            trip.emplace_back(r, r, alpha + 2.0 * cx + 2.0 * cy);
            if (i > 1) trip.emplace_back(r, unknown(i - 1, j), -cx);
            if (i < nx) trip.emplace_back(r, unknown(i + 1, j), -cx);
            if (j > 1) trip.emplace_back(r, unknown(i, j - 1), -cy);
            if (j < ny) trip.emplace_back(r, unknown(i, j + 1), -cy);
        }
    }
    Eigen::SparseMatrix<double> a(nx * ny, nx * ny);
    a.setFromTriplets(trip.begin(), trip.end());
    m.ldlt.compute(a);
    if (m.ldlt.info() != Eigen::Success) throw LinearSolveError("sparse Cholesky factorization failed");
}

ShiftedLaplacianSolver::~ShiftedLaplacianSolver() = default;
ShiftedLaplacianSolver::ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept = default;
ShiftedLaplacianSolver& ShiftedLaplacianSolver::operator=(ShiftedLaplacianSolver&&) noexcept = default;

const Grid& ShiftedLaplacianSolver::grid() const noexcept { return impl_->grid; }
double ShiftedLaplacianSolver::alpha() const noexcept { return impl_->alpha; }
double ShiftedLaplacianSolver::beta() const noexcept { return impl_->beta; }

ScalarField ShiftedLaplacianSolver::solve(const ScalarField& rhs) const {
    const Impl& m = *impl_;
    require_same_grid(m.grid, rhs.grid(), "ShiftedLaplacianSolver::solve");
    const Grid& g = m.grid;
    ScalarField u = rhs;

    if (g.dim() == 1) {
        const int n = g.interior(0);
        const double h2 = g.h(0) * g.h(0);
        // Forward sweep on interior nodes 1..n, boundary data moved to the right-hand side.
        std::vector<double> d(n);
        for (int i = 0; i < n; ++i) d[i] = rhs[i + 1];
        d[0] += m.beta / h2 * rhs[0];
        d[n - 1] += m.beta / h2 * rhs[n + 1];
        d[0] /= m.denom[0];
        for (int i = 1; i < n; ++i) d[i] = (d[i] - m.off * d[i - 1]) / m.denom[i];
        for (int i = n - 2; i >= 0; --i) d[i] -= m.c_prime[i] * d[i + 1];
        for (int i = 0; i < n; ++i) {
            if (!std::isfinite(d[i])) throw LinearSolveError("tridiagonal solve produced a non-finite value");
            u[i + 1] = d[i];
        }
        return u;
    }

    const int nx = g.interior(0);
    const int ny = g.interior(1);
    const double cx = m.beta / (g.h(0) * g.h(0));
    const double cy = m.beta / (g.h(1) * g.h(1));
    Eigen::VectorXd b(nx * ny);
    for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            double v = rhs[g.index(i, j)];
            if (i == 1) v += cx * rhs[g.index(0, j)];
            if (i == nx) v += cx * rhs[g.index(nx + 1, j)];
            if (j == 1) v += cy * rhs[g.index(i, 0)];
            if (j == ny) v += cy * rhs[g.index(i, ny + 1)];
            b[(i - 1) + nx * (j - 1)] = v;
        }
    }
    const Eigen::VectorXd x = m.ldlt.solve(b);
    if (m.ldlt.info() != Eigen::Success) throw LinearSolveError("sparse Cholesky solve failed");
    for (int j = 1; j <= ny; ++j) {
        for (int i = 1; i <= nx; ++i) {
            const double v = x[(i - 1) + nx * (j - 1)];
            if (!std::isfinite(v)) throw LinearSolveError("sparse solve produced a non-finite value");
            u[g.index(i, j)] = v;
        }
    }
    return u;
}

}  // namespace mfg
