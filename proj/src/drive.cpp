#include "kzcycle/drive.hpp"
#include "kzcycle/errors.hpp"

#include <cmath>

namespace kz {

namespace {

// pow(base, expo) with an exact-integer fast path; the drive kernels sit in
// the inner loop of every integration step.
double power(double base, double expo)
{
    const int ie = static_cast<int>(std::llround(expo));
    if (std::fabs(expo - ie) < 1e-12 && ie >= 1 && ie <= 64) {
        double acc = 1.0;
        double b = base;
        for (int n = ie; n > 0; n >>= 1) {
            if (n & 1)
                acc *= b;
            b *= b;
        }
        return acc;
    }
    return std::pow(base, expo);
}

void validate_common(double znu, double delta)
{
    if (!(znu > 0.0))
        throw config_error("drive: znu must be positive");
    if (!(delta > 0.0))
        throw config_error("drive: delta must be positive");
}

} // namespace

double Drive::omega_sq(double t) const
{
    const double u = delta * std::fabs(t);
    switch (kind) {
    case Protocol::power_law:
        return power(u, 2.0 * znu);
    case Protocol::gapped:
        return power(t0 + u, 2.0 * znu);
    case Protocol::corrected:
        return power(u, 2.0 * znu) + gamma * power(u, n_corr);
    }
    return 0.0;
}

double Drive::omega(double t) const
{
    return std::sqrt(omega_sq(t));
}

double Drive::omega_sq_dot(double t) const
{
    const double u = delta * std::fabs(t);
    const double sgn = (t < 0.0) ? -delta : delta;
    switch (kind) {
    case Protocol::power_law:
        return sgn * 2.0 * znu * power(u, 2.0 * znu - 1.0);
    case Protocol::gapped:
        return sgn * 2.0 * znu * power(t0 + u, 2.0 * znu - 1.0);
    case Protocol::corrected:
        return sgn
            * (2.0 * znu * power(u, 2.0 * znu - 1.0)
               + gamma * n_corr * power(u, n_corr - 1.0));
    }
    return 0.0;
}

double Drive::omega_dot(double t) const
{
    return omega_sq_dot(t) / (2.0 * omega(t));
}

Drive make_power_law(double znu, double delta)
{
    validate_common(znu, delta);
    Drive d;
    d.kind = Protocol::power_law;
    d.znu = znu;
    d.delta = delta;
    return d;
}

Drive make_gapped(double znu, double delta, double t0)
{
    validate_common(znu, delta);
    if (!(t0 > 0.0))
        throw config_error("drive: gapped protocol requires t0 > 0");
    Drive d;
    d.kind = Protocol::gapped;
    d.znu = znu;
    d.delta = delta;
    d.t0 = t0;
    return d;
}

Drive make_corrected(double znu, double delta, double gamma, double n_corr)
{
    validate_common(znu, delta);
    if (!(gamma >= 0.0))
        throw config_error("drive: correction amplitude must be nonnegative");
    if (!(n_corr > 2.0 * znu))
        throw config_error("drive: correction exponent must exceed 2*znu");
    Drive d;
    d.kind = Protocol::corrected;
    d.znu = znu;
    d.delta = delta;
    d.gamma = gamma;
    d.n_corr = n_corr;
    return d;
}

double time_scale(const Drive& d)
{
    return std::pow(d.delta, -d.znu / (1.0 + d.znu));
}

double width_scale(const Drive& d)
{
    return std::sqrt(time_scale(d));
}

Drive rescaled(const Drive& d)
{
    Drive r = d;
    r.delta = 1.0;
    if (d.kind == Protocol::gapped)
        r.t0 = d.t0 * std::pow(d.delta, -1.0 / (1.0 + d.znu));
    if (d.kind == Protocol::corrected)
        r.gamma = d.gamma
            * std::pow(d.delta, (d.n_corr - 2.0 * d.znu) / (1.0 + d.znu));
    return r;
}

double adiabaticity(const Drive& d, double t)
{
    return std::fabs(d.omega_dot(t)) / d.omega_sq(t);
}

double freezing_time(const Drive& d)
{
    if (d.kind != Protocol::power_law)
        throw config_error(
            "freezing_time: closed form exists only for the power-law drive");
    return std::pow(d.znu, 1.0 / (1.0 + d.znu))
        * std::pow(d.delta, -d.znu / (1.0 + d.znu));
}

double adiabatic_start(const Drive& d, double margin)
{
    if (!(margin > 0.0) || !(margin < 1.0))
        throw config_error("adiabatic_start: margin must lie in (0, 1)");
    const double tstar = std::pow(d.znu, 1.0 / (1.0 + d.znu))
        * std::pow(d.delta, -d.znu / (1.0 + d.znu));
    return -tstar * std::pow(margin, -1.0 / (1.0 + d.znu));
}

} // namespace kz
