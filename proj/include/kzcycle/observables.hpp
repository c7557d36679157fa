#pragma once

#include "kzcycle/ermakov.hpp"

#include <vector>

namespace kz {

// Observables of the evolved Gaussian state relative to the instantaneous
// ground state at trap frequency omega.  All take the width state (xi,
// xi_dot); omega = 0 is the gapless point, where the excitation number
// diverges (+inf), the overlap vanishes, and the excess heat stays finite.

double excitation_number(double omega, double xi, double xi_dot);
double fidelity(double omega, double xi, double xi_dot);
double excess_heat(double omega, double xi, double xi_dot);

// Occupation probabilities p_0..p_n_max of instantaneous levels (odd levels
// vanish by parity).  Requires omega > 0.  The tail bound dominates the
// total weight beyond n_max.
std::vector<double> excitation_distribution(double omega, double xi,
                                            double xi_dot, int n_max);
double distribution_tail_bound(double omega, double xi, double xi_dot,
                               int n_max);

struct PlateauOptions {
    double window_fraction = 0.25; // trailing share of the recorded span
    double min_periods = 3.0;      // required width in units of pi in zeta
};

struct PlateauStats {
    double t_begin = 0.0; // trimmed window bounds
    double t_end = 0.0;
    double periods = 0.0; // zeta span of the window divided by pi
    double n_exc_mean = 0.0, n_exc_amp = 0.0;
    double fidelity_mean = 0.0, fidelity_amp = 0.0;
    double heat_mean = 0.0, heat_amp = 0.0;
    long long points = 0;
};

// Time averages over the trailing window of a recorded trajectory spanning
// [span_begin, span_end].  The window start is advanced so the zeta span is
// an integer multiple of pi — xi^2 oscillates as sin(2 zeta), so partial
// oscillations would bias the mean.  Means are trapezoid averages in t;
// amplitudes are half the pointwise spread.  Throws window_error when the
// window would begin before t_min (freezing time), covers fewer than
// min_periods, or holds too few points.
PlateauStats plateau_average(const std::vector<TrajectoryPoint>& pts,
                             double span_begin, double span_end, double t_min,
                             const PlateauOptions& opt = {});

} // namespace kz
