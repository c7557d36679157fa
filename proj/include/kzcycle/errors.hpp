// Error types thrown by the library.  The CLI maps them to exit codes:
// configuration problems -> 1, numerical failures -> 2.
#pragma once

#include <stdexcept>
#include <string>

namespace kz {

// Width-mode state at a single time; also used to hand back the last valid
// state when an integration fails.
struct WidthState {
    double t = 0.0;
    double xi = 0.0;
    double xi_dot = 0.0;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive integration could not proceed (step underflow or step budget
// exhausted).  Carries the last accepted state.
struct integration_error : std::runtime_error {
    WidthState last;
    integration_error(const std::string& msg, WidthState s)
        : std::runtime_error(msg), last(s) {}
};

// Fixed-point or root solve failed to converge.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested averaging window is too short or starts before the freezing time.
struct window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Self-consistent mass went negative: the run left the symmetric phase,
// which the evolution equations do not describe.
struct symmetric_phase_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace kz
