#pragma once

#include "mfg/field.hpp"

namespace mfg {

/// Five-point (three-point in 1D) centered Laplacian on interior nodes.
/// Boundary rows of the result are zero; boundary values of `f` are read.
ScalarField laplacian(const ScalarField& f);

/// Centered differences on interior nodes; second-order one-sided
/// differences on boundary nodes along the normal axis.
VectorField gradient(const ScalarField& f);

/// Per-axis upwind differences selected by the sign of `direction`:
/// a positive component takes the backward difference (information
/// arriving from lower indices), a negative one the forward difference,
/// and a zero component falls back to the centered difference.
VectorField gradient_upwind(const ScalarField& f, const VectorField& direction);

/// Monotone (Godunov / Rouy-Tourin) approximation of |grad f| on interior
/// nodes: sqrt(sum_k max(D_k^- f, -D_k^+ f, 0)^2). Zero on the boundary.
ScalarField godunov_gradient_norm(const ScalarField& f);

/// Product-trapezoid quadrature (boundary nodes weighted 1/2 per axis).
double integrate(const ScalarField& f);

/// Quadrature of f * g.
double inner(const ScalarField& f, const ScalarField& g);

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double h1_seminorm = 0.0;
};

Norms discrete_norms(const ScalarField& f);

/// (integral |f|^p)^(1/p) with the trapezoid weights; p >= 1.
double lp_norm(const ScalarField& f, double p);

/// Discrete H^1 seminorm alone (cheaper than discrete_norms).
double h1_seminorm(const ScalarField& f);

}  // namespace mfg
