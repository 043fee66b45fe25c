#include "mfg/kappa.hpp"

#include <algorithm>
#include <cmath>

#include "mfg/error.hpp"

namespace mfg {

KappaModel KappaModel::constant(double kappa0) {
    if (!(kappa0 > 0.0) || !std::isfinite(kappa0)) throw PreconditionError("kappa: kappa0 must be finite and > 0");
    KappaModel k;
    k.kind_ = Kind::constant;
    k.kappa0_ = kappa0;
    return k;
}

KappaModel KappaModel::affine(double kappa0, double r_max, double kappa_min) {
    KappaModel k = constant(kappa0);
    if (!(r_max > 0.0)) throw PreconditionError("kappa: r_max must be > 0");
    if (!(kappa_min > 0.0) || !(kappa_min <= kappa0)) {
        throw PreconditionError("kappa: kappa_min must lie in (0, kappa0]");
    }
    k.kind_ = Kind::affine;
    k.r_max_ = r_max;
    k.kappa_min_ = kappa_min;
    return k;
}

KappaModel KappaModel::rational(double kappa0, double c) {
    KappaModel k = constant(kappa0);
    if (!(c >= 0.0) || !std::isfinite(c)) throw PreconditionError("kappa: c must be finite and >= 0");
    k.kind_ = Kind::rational;
    k.c_ = c;
    return k;
}

KappaModel KappaModel::make(Kind kind, double kappa0, double r_max, double kappa_min, double c) {
    KappaModel k;
    switch (kind) {
        case Kind::constant:
            k = constant(kappa0);
            break;
        case Kind::affine:
            k = affine(kappa0, r_max, kappa_min);
            break;
        case Kind::rational:
            k = rational(kappa0, c);
            break;
    }
    k.r_max_ = r_max;
    k.kappa_min_ = kappa_min;
    k.c_ = c;
    return k;
}

double KappaModel::operator()(double r) const noexcept {
    r = std::max(r, 0.0);
    switch (kind_) {
        case Kind::constant:
            return kappa0_;
        case Kind::affine:
            return std::max(kappa0_ * (1.0 - r / r_max_), kappa_min_);
        case Kind::rational:
            return kappa0_ / (1.0 + c_ * r);
    }
    return kappa0_;
}

ScalarField KappaModel::apply(const ScalarField& rho) const {
    ScalarField out(rho.grid());
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = (*this)(rho[i]);
    return out;
}

double KappaModel::lipschitz() const noexcept {
    switch (kind_) {
        case Kind::constant:
            return 0.0;
        case Kind::affine:
            return kappa0_ / r_max_;
        case Kind::rational:
            return kappa0_ * c_;
    }
    return 0.0;
}

std::string to_string(KappaModel::Kind kind) {
    switch (kind) {
        case KappaModel::Kind::constant:
            return "constant";
        case KappaModel::Kind::affine:
            return "affine";
        case KappaModel::Kind::rational:
            return "rational";
    }
    return "constant";
}

KappaModel::Kind kappa_kind_from_string(const std::string& s) {
    if (s == "constant") return KappaModel::Kind::constant;
    if (s == "affine") return KappaModel::Kind::affine;
    if (s == "rational") return KappaModel::Kind::rational;
    throw ConfigError("[kappa].kind", "unknown kappa kind '" + s + "' (expected constant, affine or rational)");
}

}  // namespace mfg
