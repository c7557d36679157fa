#pragma once

#include "kzcycle/errors.hpp"

namespace kz {

// Exact solution of the width equation for the unit-rate power-law sweep
// omega^2 = |t|^{2*znu}, written per branch as
//   xi^2(t) = a^2 x1(u)^2 + b^2 x2(u)^2,   u = |t|,
// where (x1, x2) is the generalized oscillatory pair of airy_gen at
// p = 1/(2 + 2*znu) and (a, b) are fixed by the adiabatic approach.

double exponent_p(double znu); // p = 1/(2+2*znu), in (0, 1/2)
double znu_of_p(double p);     // inverse map (1-2p)/(2p)

struct BranchCoeffs {
    double a;    // multiplies x1 = ai
    double b_im; // multiplies x2 = bi (imaginary part; real part vanishes)
};

BranchCoeffs approach_coeffs(double p);  // valid for t <= 0
BranchCoeffs departure_coeffs(double p); // valid for t >= 0

// Closed-form width and velocity at any time of the unit-rate sweep.
WidthState xi_analytic(double p, double t);

// Width at the crossing: Gamma(p) Gamma(p+1) / (2 pi p^{2p}).
double xi_squared_at_zero(double p);

// One-sided limit of d(xi^2)/d|t| at the crossing: -cot(p pi) on the
// approach side (side < 0), +cot(p pi) after it (side > 0).  Note that as
// a derivative in t itself the slope is +cot(p pi) on both sides; only the
// |t| parametrization flips the approach-side sign.
double xixidot_at_zero(double p, int side);

// Late-time plateaus of the departure branch.
double asymptotic_n_exc(double p);    // cot^2(p pi)
double asymptotic_fidelity(double p); // sin(p pi)

// Exponent of the half-cycle excess-energy scaling law Q ~ delta^x.
double kzm_heat_exponent(double znu); // znu/(1+znu)

} // namespace kz
