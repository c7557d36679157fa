#pragma once

namespace kz {

// Time-dependent trap frequency families for the sweep through the gapless
// point at t = 0.  All follow omega^2(t) controlled by the rate delta and
// the exponent znu:
//
//   power_law:  omega^2 = (delta*|t|)^{2*znu}
//   gapped:     omega^2 = (t0 + delta*|t|)^{2*znu}
//   corrected:  omega^2 = (delta*|t|)^{2*znu} + gamma*(delta*|t|)^{n_corr}
//
// with n_corr > 2*znu so the correction is subleading near the crossing.
enum class Protocol { power_law, gapped, corrected };

struct Drive {
    Protocol kind = Protocol::power_law;
    double znu = 1.0;
    double delta = 1.0;
    double t0 = 0.0;
    double gamma = 0.0;
    double n_corr = 0.0;

    double omega_sq(double t) const;
    double omega(double t) const;
    // d(omega^2)/dt; one-sided values at t = 0 where the derivative jumps
    double omega_sq_dot(double t) const;
    // d(omega)/dt = omega_sq_dot / (2*omega); undefined where omega = 0
    double omega_dot(double t) const;
};

// Factories validate parameters (throw config_error): znu > 0, delta > 0,
// t0 > 0 for gapped, gamma >= 0 and n_corr > 2*znu for corrected.
Drive make_power_law(double znu, double delta);
Drive make_gapped(double znu, double delta, double t0);
Drive make_corrected(double znu, double delta, double gamma, double n_corr);

// Kibble-Zurek scales of the power-law sweep at rate delta:
// time_scale = delta^{-znu/(1+znu)}, width_scale = sqrt(time_scale).
double time_scale(const Drive& d);
double width_scale(const Drive& d);

// Equivalent unit-rate drive: omega_sq of the original at t = time_scale*s
// equals omega_sq of the rescaled drive at s divided by time_scale^2.
// Maps t0 -> t0*delta^{-1/(1+znu)} and gamma -> gamma*delta^{(n-2znu)/(1+znu)}.
Drive rescaled(const Drive& d);

// Instantaneous adiabaticity parameter |d(omega)/dt| / omega^2.
double adiabaticity(const Drive& d, double t);

// Freezing time t* where the adiabaticity parameter reaches 1:
// t* = znu^{1/(1+znu)} * delta^{-znu/(1+znu)}.  Only the pure power-law
// sweep has this closed form; other protocols throw config_error.
double freezing_time(const Drive& d);

// Start time t < 0 at which the power-law adiabaticity parameter equals
// `margin`: t = -t* * margin^{-1/(1+znu)}.  For the gapped and corrected
// families the same formula is used; their larger omega makes it a
// conservative (more adiabatic) choice.
double adiabatic_start(const Drive& d, double margin = 1e-3);

} // namespace kz
