#include "mfg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfg/error.hpp"

namespace mfg {

namespace {

void check_axis(double length, int n, const char* axis) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw PreconditionError(std::string("grid: extent along ") + axis + " must be finite and > 0");
    }
    if (n < 3) {
        throw PreconditionError(std::string("grid: need at least 3 interior nodes along ") + axis);
    }
}

}  // namespace

Grid Grid::line(double length, int n) {
    check_axis(length, n, "x");
    Grid g;
    g.dim_ = 1;
    g.n_ = {n, 0};
    g.length_ = {length, 0.0};
    g.h_ = {length / (n + 1), 0.0};
    return g;
}

Grid Grid::rect(double lx, double ly, int nx, int ny) {
    check_axis(lx, nx, "x");
    check_axis(ly, ny, "y");
    Grid g;
    g.dim_ = 2;
    g.n_ = {nx, ny};
    g.length_ = {lx, ly};
    g.h_ = {lx / (nx + 1), ly / (ny + 1)};
    return g;
}

double Grid::min_h() const noexcept {
    return dim_ == 1 ? h_[0] : std::min(h_[0], h_[1]);
}

double Grid::cell_volume() const noexcept {
    return dim_ == 1 ? h_[0] : h_[0] * h_[1];
}

std::size_t Grid::size() const noexcept {
    std::size_t s = 1;
    for (int k = 0; k < dim_; ++k) s *= static_cast<std::size_t>(n_[k] + 2);
    return s;
}

std::size_t Grid::interior_size() const noexcept {
    std::size_t s = 1;
    for (int k = 0; k < dim_; ++k) s *= static_cast<std::size_t>(n_[k]);
    return s;
}

std::array<int, 2> Grid::multi_index(std::size_t idx) const noexcept {
    const auto sx = static_cast<std::size_t>(n_[0] + 2);
    return {static_cast<int>(idx % sx), static_cast<int>(idx / sx)};
}

bool Grid::is_boundary(std::size_t idx) const noexcept {
    const auto [i, j] = multi_index(idx);
    if (i == 0 || i == n_[0] + 1) return true;
    if (dim_ == 2 && (j == 0 || j == n_[1] + 1)) return true;
    return false;
}

std::array<double, 2> Grid::position(std::size_t idx) const noexcept {
    const auto [i, j] = multi_index(idx);
    return {coord(0, i), dim_ == 2 ? coord(1, j) : 0.0};
}

}  // namespace mfg
