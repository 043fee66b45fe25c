#pragma once

#include <string>

#include "mfg/field.hpp"

namespace mfg {

/// Density-dependent speed bound kappa(r): continuous, bounded, strictly
/// positive and non-increasing on [0, inf).
///
///   constant:  kappa(r) = kappa0
///   affine:    kappa(r) = max(kappa0 (1 - r / r_max), kappa_min)
///   rational:  kappa(r) = kappa0 / (1 + c r)
///
/// Negative arguments (round-off undershoot of a density) are clamped to 0.
class KappaModel {
public:
    enum class Kind { constant, affine, rational };

    /// constant kappa = 1.
    KappaModel() = default;

    static KappaModel constant(double kappa0);
    static KappaModel affine(double kappa0, double r_max, double kappa_min);
    static KappaModel rational(double kappa0, double c);
    /// Validates the parameters used by `kind`; the others are stored as given.
    static KappaModel make(Kind kind, double kappa0, double r_max, double kappa_min, double c);

    double operator()(double r) const noexcept;
    ScalarField apply(const ScalarField& rho) const;

    /// kappa(0), which is also the supremum since kappa is non-increasing.
    double at_zero() const noexcept { return kappa0_; }
    double sup() const noexcept { return kappa0_; }
    /// Global Lipschitz constant on [0, inf).
    double lipschitz() const noexcept;

    Kind kind() const noexcept { return kind_; }
    double kappa0() const noexcept { return kappa0_; }
    double r_max() const noexcept { return r_max_; }
    double kappa_min() const noexcept { return kappa_min_; }
    double c() const noexcept { return c_; }

    bool operator==(const KappaModel&) const = default;

private:
    Kind kind_ = Kind::constant;
    double kappa0_ = 1.0;
    double r_max_ = 1.0;
    double kappa_min_ = 0.0;
    double c_ = 0.0;
};

std::string to_string(KappaModel::Kind kind);
KappaModel::Kind kappa_kind_from_string(const std::string& s);

}  // namespace mfg
