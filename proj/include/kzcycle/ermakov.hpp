#pragma once

#include "kzcycle/drive.hpp"
#include "kzcycle/errors.hpp"

#include <vector>

namespace kz {

// The variance width xi of the driven oscillator ground state obeys
//   xi'' + omega^2(t) xi = 1/(4 xi^3),
// normalized so that <x^2> = xi^2 and the static ground state sits at
// xi_eq = (2 omega)^{-1/2}.

struct InitState {
    double xi;
    double xi_dot;
};

// First-order adiabatic initial data at time t: the instantaneous
// equilibrium width plus its drift, xi = (2w)^{-1/2}, xi' = -w' (2w)^{-3/2}.
// Requires omega(t) > 0.
InitState adiabatic_init(const Drive& d, double t);

struct TrajectoryPoint {
    double t;
    double omega;
    double xi;
    double xi_dot;
    double phase; // accumulated integral of dt / (2 xi^2)
    double zeta;  // accumulated integral of omega dt
};

struct Trajectory {
    std::vector<TrajectoryPoint> natural; // accepted integrator steps
    std::vector<TrajectoryPoint> sampled; // dense output at requested times
    long long steps = 0;
    long long rhs_evals = 0;
};

struct EvolveOptions {
    double tol = 1e-10;
    long long max_steps = 20000000;
    std::vector<double> sample_times; // sorted, within [t_start, t_end]
    bool record_natural = true;
    // natural points before this time are discarded (trailing-window scans)
    double record_from = -1e300;
};

// Integrate the width equation from t_start to t_end.  When the interval
// straddles t = 0 the integration lands on it exactly, so no step spans the
// non-smooth point of the drive.  Sample times are evaluated through the
// integrator's dense output.  Throws config_error for invalid options and
// integration_error (carrying the last state) when the step size underflows
// or the step budget is exhausted.
Trajectory evolve_width(const Drive& d, double t_start, double t_end,
                        InitState init, const EvolveOptions& opt = {});

} // namespace kz
