// Large-N limit of the driven O(N) chain: L width modes on a ring, coupled
// only through a self-consistent mass that every mode feels.  The bare mass
// is ramped through its critical value and the q = 0 mode goes soft there,
// so the single-oscillator crossing physics reappears with an interacting
// backreaction on top.
#pragma once

#include "kzcycle/drive.hpp"
#include "kzcycle/ermakov.hpp"

#include <vector>

namespace kz {

// Ring couplings J(q_k) at the Brillouin points q_k = 2 pi k / L for
// k = 0 .. L-1, built from pair couplings J_r = coupling * r^{-alpha} with
// ranges r = 1 .. L/2 - 1.  For alpha <= 1 the couplings are Kac-rescaled by
// their own sum so J(0) == 1 exactly and the energy stays extensive; for
// alpha > 1 the bare sum already converges and no rescaling is applied.
// L must be even, 4 <= L <= 4096 (an L = 2 ring has no pair within half the
// ring, so the sum would be empty); alpha > 0; coupling > 0.
std::vector<double> build_dispersion(int L, double alpha,
                                     double coupling = 1.0);

// Shifted single-mode energies eps_q = J(0) - J(q).  eps_0 == 0 and all
// other entries are positive: the softening happens at q = 0 only.
std::vector<double> mode_energies(const std::vector<double>& dispersion);

// Critical bare mass: the value at which the self-consistent mass vanishes
// in equilibrium.  The q = 0 equilibrium width diverges at that point, so
// its measure-zero contribution is dropped and the remaining sum gives
// mu_c = -(g / 6L) sum_{q != 0} 1 / (2 sqrt(eps_q)) in closed form.
double solve_mu_c(const std::vector<double>& energies, double g);

// Equilibrium self-consistent mass at bare mass mu_bare > 0, from the damped
// fixed point of  x = mu_bare + (g / 6L) sum_q 1 / (2 sqrt(eps_q + x)),
// converged to 1e-10.  All modes, q = 0 included, are gapped here.
double equilibrium_mu_eff(const std::vector<double>& energies, double g,
                          double mu_bare);

struct SphericalConfig {
    int L = 256;            // ring size, even, capped at 4096
    double alpha = 0.5;     // coupling decay exponent
    double g = 0.1;         // quartic coupling strength, >= 0
    double coupling = 1.0;  // pair-coupling scale before Kac rescaling
    double znu = 1.0;       // bare-mass ramp mu(t) = mu_c + (delta |t|)^{2 znu}
    double delta = 0.05;    // ramp rate
    double tol = 1e-10;     // integrator tolerance
    bool parallel = false;  // OpenMP over modes inside the derivative
    long long max_steps = 20000000;
};

// Optional explicit initial widths (sizes L); default is per-mode adiabatic
// initial data at t_start with the equilibrium self-consistent mass.
struct SphericalInit {
    std::vector<double> xi;
    std::vector<double> xi_dot;
};

struct SphericalResult {
    double mu_c = 0.0;
    std::vector<double> energies;          // eps_q used for the run
    std::vector<double> times;             // accepted integrator steps
    std::vector<double> mu_eff;            // self-consistent mass at each step
    // Backreaction of the gapped modes: (g / 6L) sum_{q != 0} of the width
    // excess xi_q^2 - 1/(2 omega_q) over instantaneous equilibrium.
    std::vector<double> lag;
    std::vector<TrajectoryPoint> zero_mode; // soft-mode track, q = 0
    std::vector<WidthState> final_states;   // one per mode, at t_end
    long long steps = 0;
    long long rhs_evals = 0;
};

// Integrate all L modes from t_start to t_end with the self-consistent mass
// recomputed from the instantaneous widths inside every derivative
// evaluation.  The mode sum uses a fixed-order pairwise reduction, so the
// result is identical whether or not the mode loop runs parallel.  Throws
// config_error for bad parameters, integration_error on step failure, and
// symmetric_phase_error if the self-consistent mass drops below -tol at an
// accepted step (the run left the symmetric phase).
SphericalResult evolve_spherical(const SphericalConfig& c, double t_start,
                                 double t_end,
                                 const SphericalInit* init = nullptr);

// Trapezoid mean of |values| over [t_lo, t_hi], with the window boundaries
// linearly interpolated between recorded times.  Used to reduce the lag
// series to a single backreaction measure per run.
double mean_abs_over(const std::vector<double>& times,
                     const std::vector<double>& values, double t_lo,
                     double t_hi);

} // namespace kz
