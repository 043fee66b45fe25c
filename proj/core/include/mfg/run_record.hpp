#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mfg/coupling.hpp"
#include "mfg/field.hpp"

namespace mfg {

/// Time series and snapshots produced by a solve; the input of every
/// diagnostic. All series are aligned with `times`.
struct RunRecord {
    struct Snapshot {
        double t;
        ScalarField rho;
        ScalarField phi;
        VectorField V;
    };

    std::vector<double> times;
    std::vector<double> mass;         // integral of rho
    std::vector<double> coupling;     // integral of rho * phi
    std::vector<double> rho_l1;
    std::vector<double> rho_l2;
    std::vector<double> rho_linf;
    std::vector<double> phierr_linf;  // |phi_t - Psi|_inf
    std::vector<double> phierr_h1;    // |grad (phi_t - Psi)|_L2
    std::vector<double> residual;     // per-time fixed-point residual (0 for standalone runs)
    std::vector<Snapshot> snapshots;

    double psi_star_linf = 0.0;
    std::uint64_t config_hash = 0;

    /// Throws PreconditionError if series are misaligned or times not increasing.
    void validate() const;
};

/// Builds a record from per-level fields. `phi` and `V` may be empty
/// (treated as zero); `residual` may be empty (zeros).
RunRecord build_record(std::span<const double> times, std::span<const ScalarField> rho,
                       std::span<const ScalarField> phi, std::span<const VectorField> V,
                       const ScalarField& psi_star, std::span<const double> residual,
                       std::span<const std::size_t> snapshot_steps, std::uint64_t config_hash = 0);

RunRecord build_record(const MfgSolution& solution, const ScalarField& psi_star, std::uint64_t config_hash = 0);

}  // namespace mfg
