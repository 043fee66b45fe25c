#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mfg {

/// Number of uniform steps of size dt covering [t_start, t_end]. Throws
/// PreconditionError unless the span is an integer multiple of dt (to a
/// relative 1e-9).
std::size_t step_count(double t_start, double t_end, double dt);

/// Maps each requested time to its step index k (t = t_start + k dt). Throws
/// PreconditionError for times outside the span or off the time grid, so a
/// requested snapshot can never be silently dropped or moved.
std::vector<std::size_t> snapshot_steps(std::span<const double> times, double t_start, double dt,
                                        std::size_t steps);

}  // namespace mfg
