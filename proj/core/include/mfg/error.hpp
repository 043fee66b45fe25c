#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace mfg {

/// Base class for every error raised by the solver library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields (or a field and an operator) live on different grids.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Explicit part of an IMEX step would lose monotonicity/positivity.
class CflViolation : public Error {
public:
    CflViolation(const std::string& what, double ratio)
        : Error(what + " (CFL ratio " + std::to_string(ratio) + " > 1)"), ratio_(ratio) {}
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

class LinearSolveError : public Error {
public:
    using Error::Error;
};

/// An iterative procedure hit its budget before reaching tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double residual)
        : Error(what + " (final residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A discrete a-priori bound of the scheme was violated beyond tolerance.
class BoundViolation : public Error {
public:
    using Error::Error;
};

/// Configuration file problem; `key()` is `[section].name` when known.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace mfg
