#include "mfg/run_record.hpp"

#include <string>

#include "mfg/error.hpp"
#include "mfg/operators.hpp"

namespace mfg {

void RunRecord::validate() const {
    const std::size_t n = times.size();
    for (const auto* s : {&mass, &coupling, &rho_l1, &rho_l2, &rho_linf, &phierr_linf, &phierr_h1, &residual}) {
        if (s->size() != n) throw PreconditionError("run record: series length differs from times");
    }
    for (std::size_t k = 1; k < n; ++k) {
        if (!(times[k] > times[k - 1])) throw PreconditionError("run record: times must be strictly increasing");
    }
}

RunRecord build_record(std::span<const double> times, std::span<const ScalarField> rho,
                       std::span<const ScalarField> phi, std::span<const VectorField> V,
                       const ScalarField& psi_star, std::span<const double> residual,
                       std::span<const std::size_t> snapshot_steps, std::uint64_t config_hash) {
    const std::size_t n = times.size();
    if (rho.size() != n || (!phi.empty() && phi.size() != n) || (!V.empty() && V.size() != n) ||
        (!residual.empty() && residual.size() != n)) {
        throw PreconditionError("build_record: level counts differ from the number of times");
    }
    const Grid& g = psi_star.grid();
    const ScalarField zero(g);

    RunRecord r;
    r.times.assign(times.begin(), times.end());
    r.psi_star_linf = psi_star.max_abs();
    r.config_hash = config_hash;
    for (std::size_t k = 0; k < n; ++k) {
        const ScalarField& rk = rho[k];
        const ScalarField& pk = phi.empty() ? zero : phi[k];
        require_same_grid(rk.grid(), g, "build_record");
        const Norms rn = discrete_norms(rk);
        const ScalarField err = pk - psi_star;
        r.mass.push_back(integrate(rk));
        r.coupling.push_back(inner(rk, pk));
        r.rho_l1.push_back(rn.l1);
        r.rho_l2.push_back(rn.l2);
        r.rho_linf.push_back(rn.linf);
        r.phierr_linf.push_back(err.max_abs());
        r.phierr_h1.push_back(h1_seminorm(err));
        r.residual.push_back(residual.empty() ? 0.0 : residual[k]);
    }
    for (std::size_t k : snapshot_steps) {
        if (k >= n) throw PreconditionError("build_record: snapshot step " + std::to_string(k) + " out of range");
        r.snapshots.push_back({times[k], rho[k], phi.empty() ? zero : phi[k], V.empty() ? VectorField(g) : V[k]});
    }
    return r;
}

RunRecord build_record(const MfgSolution& s, const ScalarField& psi_star, std::uint64_t config_hash) {
    return build_record(s.times, s.rho, s.phi, s.V, psi_star, s.residual_by_time, s.snapshot_steps, config_hash);
}

}  // namespace mfg
