#pragma once

#include <memory>

#include "mfg/field.hpp"

namespace mfg {

/// Factored Dirichlet operator (alpha I - beta Laplacian_h) on the interior
/// nodes of a grid. With alpha = 1, beta = nu dt this is one backward-Euler
/// diffusion step; with alpha = 0, beta = nu it is the Poisson operator.
///
/// The factorization is computed once at construction (tridiagonal in 1D,
/// sparse Cholesky in 2D) and reused by every `solve`.
class ShiftedLaplacianSolver {
public:
    ShiftedLaplacianSolver(const Grid& grid, double alpha, double beta);
    ~ShiftedLaplacianSolver();
    ShiftedLaplacianSolver(ShiftedLaplacianSolver&&) noexcept;
    ShiftedLaplacianSolver& operator=(ShiftedLaplacianSolver&&) noexcept;

    /// Solves for u with u = rhs on boundary nodes (Dirichlet data) and
    /// (alpha I - beta Laplacian_h) u = rhs on interior nodes.
    ScalarField solve(const ScalarField& rhs) const;

    const Grid& grid() const noexcept;
    double alpha() const noexcept;
    double beta() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace mfg
