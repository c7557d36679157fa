// Self-contained special functions: Gamma, Bessel J of real fractional order,
// and the generalized Airy pair that solves  x'' + t^(2*znu) x = 0.
#pragma once

namespace kz::specfun {

// Series / asymptotic switch point for bessel_j.  Both branches are accurate
// past each other around this point; continuity across it is tested.
inline constexpr double bessel_x_switch = 15.0;

// Gamma function for x > 0 (reflection handles 0 < x < 1/2 internally).
// Throws std::domain_error for x <= 0; saturates to +inf past the double
// overflow threshold (x >= 171.7).
double gamma_fn(double x);

// Bessel function of the first kind, order p with 0 < |p| < 1.
// x >= 0; x == 0 requires p > 0.  Ascending series for x <= bessel_x_switch,
// Hankel asymptotic expansion beyond; both accumulate in long double.
double bessel_j(double p, double x);

// Values and derivatives of the generalized Airy pair at a single point.
// Derivatives are taken with respect to the function argument t (>= 0),
// so they are checkable by finite differences in t.
struct AiryPair {
    double ai = 0.0;
    double bi = 0.0;
    double ai_deriv = 0.0;
    double bi_deriv = 0.0;
};

// Generalized Airy functions evaluated on the negative real axis of the
// underlying equation: with u = t >= 0 and zeta = 2p * u^(1/(2p)),
//
//   ai(u) = p*sqrt(u) * (J_{-p}(zeta) + J_{p}(zeta))
//   bi(u) = sqrt(p*u) * (J_{-p}(zeta) - J_{p}(zeta))
//
// Both solve x'' + u^{2 znu} x = 0 with znu = (1-2p)/(2p); p = 1/3 reduces
// to the standard pair Ai(-t), Bi(-t).  Valid for p in (0, 1/2].  At u = 0
// the analytic limits are returned (all four entries are finite there).
AiryPair airy_gen(double p, double t);

} // namespace kz::specfun
