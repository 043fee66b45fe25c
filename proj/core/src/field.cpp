#include "mfg/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfg/error.hpp"

namespace mfg {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw GridMismatch(std::string(what) + ": fields live on different grids");
}

ScalarField::ScalarField(Grid grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw GridMismatch("ScalarField: " + std::to_string(values_.size()) + " values for a grid of " +
                           std::to_string(grid_.size()) + " nodes");
    }
}

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(double, double)>& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto p = grid.position(i);
        out[i] = f(p[0], p[1]);
    }
    return out;
}

void ScalarField::zero_boundary() noexcept {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (grid_.is_boundary(i)) values_[i] = 0.0;
    }
}

double ScalarField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double ScalarField::boundary_max_abs() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (grid_.is_boundary(i)) m = std::max(m, std::abs(values_[i]));
    }
    return m;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "ScalarField -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(Grid grid) : grid_(grid) {
    for (int k = 0; k < grid_.dim(); ++k) comps_[k].assign(grid_.size(), 0.0);
}

double VectorField::norm_at(std::size_t i) const noexcept {
    double s = 0.0;
    for (int k = 0; k < dim(); ++k) s += comps_[k][i] * comps_[k][i];
    return std::sqrt(s);
}

double VectorField::max_norm() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) m = std::max(m, norm_at(i));
    return m;
}

double VectorField::max_directional_rate() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double r = 0.0;
        for (int k = 0; k < dim(); ++k) r += std::abs(comps_[k][i]) / grid_.h(k);
        m = std::max(m, r);
    }
    return m;
}

VectorField& VectorField::operator*=(double s) noexcept {
    for (int k = 0; k < dim(); ++k) {
        for (double& v : comps_[k]) v *= s;
    }
    return *this;
}

VectorField blend(const VectorField& a, const VectorField& b, double w) {
    require_same_grid(a.grid(), b.grid(), "blend");
    VectorField out(a.grid());
    for (int k = 0; k < a.dim(); ++k) {
        auto ca = a.component(k);
        auto cb = b.component(k);
        auto co = out.component(k);
        for (std::size_t i = 0; i < co.size(); ++i) co[i] = (1.0 - w) * ca[i] + w * cb[i];
    }
    return out;
}

}  // namespace mfg
