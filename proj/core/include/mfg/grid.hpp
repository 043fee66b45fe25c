#pragma once

#include <array>
#include <cstddef>

namespace mfg {

/// Tensor-product grid on [0, Lx] (x [0, Ly]) with a Dirichlet boundary layer.
///
/// Axis k has n_k interior nodes and n_k + 2 nodes in total; indices 0 and
/// n_k + 1 are boundary nodes. Spacing is h_k = L_k / (n_k + 1). Nodes are
/// stored x-fastest: flat index = i + (nx + 2) * j.
class Grid {
public:
    static Grid line(double length, int n);
    static Grid rect(double lx, double ly, int nx, int ny);

    int dim() const noexcept { return dim_; }
    int interior(int axis) const noexcept { return n_[axis]; }
    int nodes(int axis) const noexcept { return axis < dim_ ? n_[axis] + 2 : 1; }
    double length(int axis) const noexcept { return length_[axis]; }
    double h(int axis) const noexcept { return h_[axis]; }
    double min_h() const noexcept;
    /// Product of spacings (quadrature weight of an interior node).
    double cell_volume() const noexcept;

    std::size_t size() const noexcept;
    std::size_t interior_size() const noexcept;
    std::size_t stride(int axis) const noexcept { return axis == 0 ? 1 : static_cast<std::size_t>(n_[0] + 2); }

    std::size_t index(int i, int j = 0) const noexcept {
        return static_cast<std::size_t>(i) + stride(1) * static_cast<std::size_t>(j);
    }
    /// Per-axis node indices of a flat index.
    std::array<int, 2> multi_index(std::size_t idx) const noexcept;
    bool is_boundary(std::size_t idx) const noexcept;

    double coord(int axis, int i) const noexcept { return h_[axis] * i; }
    std::array<double, 2> position(std::size_t idx) const noexcept;

    bool operator==(const Grid&) const = default;

private:
    Grid() = default;

    int dim_ = 1;
    std::array<int, 2> n_{0, 0};
    std::array<double, 2> length_{0.0, 0.0};
    std::array<double, 2> h_{0.0, 0.0};
};

}  // namespace mfg
