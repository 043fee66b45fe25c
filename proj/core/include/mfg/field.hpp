#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

/// One real value per grid node, boundary layer included.
class ScalarField {
public:
    explicit ScalarField(Grid grid, double value = 0.0);
    /// Throws GridMismatch when `values.size() != grid.size()`.
    ScalarField(Grid grid, std::vector<double> values);

    /// Samples f(x, y) at every node (y = 0 in 1D).
    static ScalarField sample(const Grid& grid, const std::function<double(double, double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    void zero_boundary() noexcept;
    double max_abs() const noexcept;
    double min() const noexcept;
    double max() const noexcept;
    /// Largest |value| over boundary nodes.
    double boundary_max_abs() const noexcept;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s) noexcept;

    bool operator==(const ScalarField&) const = default;

private:
    Grid grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Grid-aligned vector samples: one component array per spatial axis.
class VectorField {
public:
    explicit VectorField(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    int dim() const noexcept { return grid_.dim(); }

    std::span<const double> component(int axis) const noexcept { return comps_[axis]; }
    std::span<double> component(int axis) noexcept { return comps_[axis]; }

    double norm_at(std::size_t i) const noexcept;
    /// max over nodes of the Euclidean norm.
    double max_norm() const noexcept;
    /// max over nodes of sum_k |V_k| / h_k (upwind CFL numerator).
    double max_directional_rate() const noexcept;

    VectorField& operator*=(double s) noexcept;

    bool operator==(const VectorField&) const = default;

private:
    Grid grid_;
    std::array<std::vector<double>, 2> comps_;
};

/// (1 - w) a + w b, component-wise.
VectorField blend(const VectorField& a, const VectorField& b, double w);

/// Throws GridMismatch unless both grids agree.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace mfg
