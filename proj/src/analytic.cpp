#include "kzcycle/analytic.hpp"
#include "kzcycle/specfun.hpp"

#include <cmath>

namespace kz {

namespace {

constexpr double PI = 3.14159265358979323846;

void validate_p(double p)
{
    if (!(p > 0.0) || !(p < 0.5))
        throw config_error("analytic: p must lie in (0, 1/2)");
}

} // namespace

double exponent_p(double znu)
{
    if (!(znu > 0.0))
        throw config_error("exponent_p: znu must be positive");
    return 1.0 / (2.0 + 2.0 * znu);
}

double znu_of_p(double p)
{
    validate_p(p);
    return (1.0 - 2.0 * p) / (2.0 * p);
}

BranchCoeffs approach_coeffs(double p)
{
    validate_p(p);
    return {std::sqrt(PI / (2.0 * p)) / (2.0 * std::cos(0.5 * p * PI)),
            std::sqrt(PI / 2.0) / (2.0 * std::sin(0.5 * p * PI))};
}

BranchCoeffs departure_coeffs(double p)
{
    validate_p(p);
    return {std::sqrt(PI / (2.0 * p)) / (2.0 * std::sin(0.5 * p * PI)),
            std::sqrt(PI / 2.0) / (2.0 * std::cos(0.5 * p * PI))};
}

WidthState xi_analytic(double p, double t)
{
    validate_p(p);
    const double u = std::fabs(t);
    const BranchCoeffs c = (t < 0.0) ? approach_coeffs(p) : departure_coeffs(p);
    const auto g = specfun::airy_gen(p, u);

    const double a2 = c.a * c.a, b2 = c.b_im * c.b_im;
    const double xi2 = a2 * g.ai * g.ai + b2 * g.bi * g.bi;
    const double dxi2_du =
        2.0 * (a2 * g.ai * g.ai_deriv + b2 * g.bi * g.bi_deriv);
    const double dxi2_dt = (t < 0.0) ? -dxi2_du : dxi2_du;

    const double xi = std::sqrt(xi2);
    return {t, xi, dxi2_dt / (2.0 * xi)};
}

double xi_squared_at_zero(double p)
{
    validate_p(p);
    return specfun::gamma_fn(p) * specfun::gamma_fn(p + 1.0)
        / (2.0 * PI * std::pow(p, 2.0 * p));
}

double xixidot_at_zero(double p, int side)
{
    validate_p(p);
    if (side == 0)
        throw config_error("xixidot_at_zero: side must be nonzero");
    const double cot = std::cos(p * PI) / std::sin(p * PI);
    return side < 0 ? -cot : cot;
}

double asymptotic_n_exc(double p)
{
    validate_p(p);
    const double cot = std::cos(p * PI) / std::sin(p * PI);
    return cot * cot;
}

double asymptotic_fidelity(double p)
{
    validate_p(p);
    return std::sin(p * PI);
}

double kzm_heat_exponent(double znu)
{
    if (!(znu > 0.0))
        throw config_error("kzm_heat_exponent: znu must be positive");
    return znu / (1.0 + znu);
}

} // namespace kz
