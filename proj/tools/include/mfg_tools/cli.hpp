#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mfg/config.hpp"
#include "mfg/coupling.hpp"
#include "mfg/diagnostics.hpp"
#include "mfg/run_record.hpp"

namespace mfg::cli {

enum ExitCode : int {
    ok = 0,
    solver_failure = 1,
    diagnostic_failure = 2,
    config_error = 3,
};

/// The battery run by `verify`: exactly the checks named in
/// config.diagnostics.checks, in the order given there.
Report verify_battery(const MfgConfig& config, const MfgSolution& solution, const RunRecord& record,
                      const ScalarField& psi_star);

/// Entry point of `mfgsolve`. Messages go to `out` and `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace mfg::cli
