#include "kzcycle/observables.hpp"
#include "kzcycle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kz {

namespace {

constexpr double PI = 3.14159265358979323846;

void validate_state(double omega, double xi)
{
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw config_error("observables: omega must be finite and >= 0");
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw config_error("observables: xi must be finite and positive");
}

// squared modulus ratio |Omega - omega|^2 / |Omega + omega|^2 for the
// complex log-derivative Omega = 1/(2 xi^2) - i xi_dot/xi
double reflection_r2(double omega, double xi, double xi_dot)
{
    const double re = 1.0 / (2.0 * xi * xi);
    const double im = xi_dot / xi;
    const double num = (re - omega) * (re - omega) + im * im;
    const double den = (re + omega) * (re + omega) + im * im;
    return num / den;
}

} // namespace

double excitation_number(double omega, double xi, double xi_dot)
{
    validate_state(omega, xi);
    const double dev = 1.0 / (2.0 * xi * xi) - omega;
    const double vel = xi_dot / xi;
    // omega = 0 divides a positive numerator by zero: +inf by design
    return xi * xi / (2.0 * omega) * (dev * dev + vel * vel);
}

double fidelity(double omega, double xi, double xi_dot)
{
    validate_state(omega, xi);
    const double sum = 1.0 / (2.0 * xi * xi) + omega;
    const double vel = xi_dot / xi;
    return std::sqrt(2.0 * omega) / xi / std::sqrt(sum * sum + vel * vel);
}

double excess_heat(double omega, double xi, double xi_dot)
{
    validate_state(omega, xi);
    return 0.5 * (xi_dot * xi_dot + omega * omega * xi * xi
                  + 1.0 / (4.0 * xi * xi))
        - 0.5 * omega;
}

std::vector<double> excitation_distribution(double omega, double xi,
                                            double xi_dot, int n_max)
{
    validate_state(omega, xi);
    if (!(omega > 0.0))
        throw config_error("excitation_distribution: requires omega > 0");
    if (n_max < 0)
        throw config_error("excitation_distribution: n_max must be >= 0");

    const double r2 = reflection_r2(omega, xi, xi_dot);
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    double pn = fidelity(omega, xi, xi_dot);
    for (int n = 0; n <= n_max; n += 2) {
        p[static_cast<std::size_t>(n)] = pn;
        pn *= r2 * (n + 1.0) / (n + 2.0);
    }
    return p;
}

double distribution_tail_bound(double omega, double xi, double xi_dot,
                               int n_max)
{
    validate_state(omega, xi);
    if (!(omega > 0.0))
        throw config_error("distribution_tail_bound: requires omega > 0");
    if (n_max < 0)
        throw config_error("distribution_tail_bound: n_max must be >= 0");

    const double r2 = reflection_r2(omega, xi, xi_dot);
    const int last = n_max - (n_max % 2); // largest populated level
    double pn = fidelity(omega, xi, xi_dot);
    for (int n = 0; n < last; n += 2)
        pn *= r2 * (n + 1.0) / (n + 2.0);
    return pn * r2 / (1.0 - r2);
}

PlateauStats plateau_average(const std::vector<TrajectoryPoint>& pts,
                             double span_begin, double span_end, double t_min,
                             const PlateauOptions& opt)
{
    if (!(opt.window_fraction > 0.0) || opt.window_fraction > 1.0)
        throw config_error("plateau: window_fraction must lie in (0, 1]");
    if (!(opt.min_periods > 0.0))
        throw config_error("plateau: min_periods must be positive");
    if (!(span_end > span_begin))
        throw config_error("plateau: need span_end > span_begin");
    if (pts.size() < 8)
        throw window_error("plateau: too few trajectory points");

    const double w0 = span_end - opt.window_fraction * (span_end - span_begin);

    // zeta at the nominal window start, by linear interpolation
    std::size_t j = 0;
    while (j < pts.size() && pts[j].t < w0)
        ++j;
    if (j == 0 || j == pts.size())
        throw window_error("plateau: trajectory does not cover the window");
    const auto& lo = pts[j - 1];
    const auto& hi = pts[j];
    const double frac_t = (w0 - lo.t) / (hi.t - lo.t);
    const double zeta_w0 = lo.zeta + frac_t * (hi.zeta - lo.zeta);
    const double zeta_end = pts.back().zeta;

    // trim forward to an integer number of half-oscillations of xi^2
    const double k = std::floor((zeta_end - zeta_w0) / PI);
    if (k < 1.0)
        throw window_error("plateau: window narrower than one oscillation");
    const double zeta_start = zeta_end - k * PI;

    std::size_t i = j == 1 ? 1 : j - 1;
    while (i < pts.size() && pts[i].zeta < zeta_start)
        ++i;
    // zeta_start >= zeta_w0 guarantees a bracketing pair exists
    const auto& a = pts[i - 1];
    const auto& b = pts[i];
    const double f = (zeta_start - a.zeta) / (b.zeta - a.zeta);
    const double t_begin = a.t + f * (b.t - a.t);

    if (t_begin < t_min)
        throw window_error("plateau: window begins before the freezing time");
    if (k < opt.min_periods)
        throw window_error("plateau: fewer oscillations than required");

    const auto value_at = [](const TrajectoryPoint& pt, int which) {
        switch (which) {
        case 0:
            return excitation_number(pt.omega, pt.xi, pt.xi_dot);
        case 1:
            return fidelity(pt.omega, pt.xi, pt.xi_dot);
        default:
            return excess_heat(pt.omega, pt.xi, pt.xi_dot);
        }
    };

    PlateauStats out;
    out.t_begin = t_begin;
    out.t_end = pts.back().t;
    out.periods = k;

    for (int which = 0; which < 3; ++which) {
        // boundary value interpolated between the bracketing points
        double prev_t = t_begin;
        double prev_v =
            value_at(a, which) + f * (value_at(b, which) - value_at(a, which));
        double vmin = prev_v, vmax = prev_v, integral = 0.0;
        long long count = 1;
        for (std::size_t q = i; q < pts.size(); ++q) {
            const double v = value_at(pts[q], which);
            integral += 0.5 * (v + prev_v) * (pts[q].t - prev_t);
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
            prev_t = pts[q].t;
            prev_v = v;
            ++count;
        }
        const double mean = integral / (out.t_end - t_begin);
        const double amp = 0.5 * (vmax - vmin);
        if (which == 0) {
            out.n_exc_mean = mean;
            out.n_exc_amp = amp;
        } else if (which == 1) {
            out.fidelity_mean = mean;
            out.fidelity_amp = amp;
        } else {
            out.heat_mean = mean;
            out.heat_amp = amp;
        }
        out.points = count;
    }
    return out;
}

} // namespace kz
