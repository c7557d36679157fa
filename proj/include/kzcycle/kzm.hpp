#pragma once

#include "kzcycle/drive.hpp"
#include "kzcycle/observables.hpp"

#include <vector>

namespace kz {

// Ordinary least squares in log-log coordinates: y ~ prefactor * x^exponent.
struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0; // rms of log-residuals
    int points_used = 0;
};

// Requires >= 3 strictly positive, finite (x, y) pairs.
FitResult fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y);

// n geometrically spaced points covering [lo, hi] inclusive; n >= 2, 0 < lo < hi.
std::vector<double> log_spaced(double lo, double hi, int n);

// One row per parameter value; every populated sequence has the same length.
// Reference entries are NaN where no closed-form prediction applies.
struct ScanResult {
    std::vector<double> parameter;
    std::vector<double> n_exc_mean, n_exc_amp;
    std::vector<double> fidelity_mean, fidelity_amp;
    std::vector<double> heat_mean, heat_amp;
    std::vector<double> ref_n_exc, ref_fidelity;
};

// Half cycles t in [-C/delta, 0]: excess heat at the gapless endpoint per
// delta, its log-log fit (exponent should be znu/(1+znu)), and the
// frozen-state impulse estimate fitted the same way.  start_constant == 0
// picks C so the largest delta still starts deep in the adiabatic regime;
// the chosen C is echoed back for metadata and insensitivity checks.
struct HalfCycleResult {
    std::vector<double> delta;
    std::vector<double> heat;        // Q(0), exact dynamics
    std::vector<double> frozen_heat; // adiabatic state frozen at -t*
    FitResult fit;
    FitResult frozen_fit;
    double start_constant = 0.0;
};

HalfCycleResult half_cycle_heat_scan(double znu,
                                     const std::vector<double>& deltas,
                                     double tol = 1e-10, int workers = 1,
                                     double start_constant = 0.0);

// Unit-rate full cycles per znu value; plateau observables against the
// closed-form asymptotes.
ScanResult full_cycle_scan(const std::vector<double>& znus, double s_end = 40.0,
                           double tol = 1e-10, int workers = 1);

// Fixed znu, scanned delta, horizon rescaled as s_end * time_scale(delta);
// plateau observables must agree across rates.
ScanResult rate_invariance_scan(double znu, const std::vector<double>& deltas,
                                double s_end = 40.0, double tol = 1e-10,
                                int workers = 1);

// Unit-rate cycles over the gap offset s0 (== t0 at delta = 1); s0 = 0 falls
// back to the gapless drive.  heat_mean tracks the generated heat through the
// trailing window; it must sink toward zero as s0 grows.
ScanResult gapped_cycle_scan(double znu, const std::vector<double>& s0s,
                             double s_end = 40.0, double tol = 1e-10,
                             int workers = 1);

// Fixed gap offset t0, scanned delta: drive into the minimal gap
// (t in [-t_i, 0]) and record the excitation number at the endpoint, where
// the gap t0^znu keeps it finite.  Adiabatic perturbation theory makes the
// log-log slope approach 2 from below as the rates shrink, so the asymptotic
// slope is best read off by extrapolating fits over nested grids.
struct GappedDeltaResult {
    std::vector<double> delta;
    std::vector<double> n_exc;
    FitResult fit;
};

GappedDeltaResult gapped_delta_scan(double znu, double t0,
                                    const std::vector<double>& deltas,
                                    double tol = 1e-10, int workers = 1);

// Unit-rate cycles with a subleading |t|^n_corr correction of strength gamma;
// plateaus must converge to the gamma = 0 universal values.
ScanResult universality_scan(double znu, const std::vector<double>& gammas,
                             double n_corr, double s_end = 40.0,
                             double tol = 1e-10, int workers = 1);

} // namespace kz
