#include "kzcycle/ermakov.hpp"
#include "kzcycle/dop853.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace kz {

namespace {

struct WidthRhs {
    const Drive* drive;

    void operator()(double t, const double* y, double* dy) const
    {
        const double xi = y[0];
        if (!(xi > 0.0)) {
            // poison the step so the integrator rejects and retries smaller
            const double nan = std::numeric_limits<double>::quiet_NaN();
            dy[0] = dy[1] = dy[2] = dy[3] = nan;
            return;
        }
        const double w2 = drive->omega_sq(t);
        dy[0] = y[1];
        dy[1] = -w2 * y[0] + 1.0 / (4.0 * xi * xi * xi);
        dy[2] = 1.0 / (2.0 * xi * xi);
        dy[3] = std::sqrt(w2);
    }
};

} // namespace

InitState adiabatic_init(const Drive& d, double t)
{
    const double w = d.omega(t);
    if (!(w > 0.0))
        throw config_error("adiabatic_init: omega must be positive here");
    const double wdot = d.omega_dot(t);
    const double xi = 1.0 / std::sqrt(2.0 * w);
    return {xi, -wdot * std::pow(2.0 * w, -1.5)};
}

Trajectory evolve_width(const Drive& d, double t_start, double t_end,
                        InitState init, const EvolveOptions& opt)
{
    if (!(t_end > t_start))
        throw config_error("evolve_width: need t_end > t_start");
    if (!(opt.tol > 0.0) || opt.tol > 1e-2)
        throw config_error("evolve_width: tol must lie in (0, 1e-2]");
    if (!(init.xi > 0.0) || !std::isfinite(init.xi)
        || !std::isfinite(init.xi_dot))
        throw config_error("evolve_width: initial width must be positive");
    if (opt.max_steps <= 0)
        throw config_error("evolve_width: max_steps must be positive");
    for (std::size_t i = 0; i < opt.sample_times.size(); ++i) {
        const double s = opt.sample_times[i];
        if (s < t_start || s > t_end)
            throw config_error("evolve_width: sample time outside range");
        if (i > 0 && s < opt.sample_times[i - 1])
            throw config_error("evolve_width: sample times must be sorted");
    }

    Dop853<WidthRhs> eng(WidthRhs{&d}, 4, opt.tol);
    const double y0[4] = {init.xi, init.xi_dot, 0.0, 0.0};
    eng.start(t_start, y0);

    Trajectory out;
    const auto push = [&](std::vector<TrajectoryPoint>& v, double t,
                          const double* y) {
        v.push_back({t, d.omega(t), y[0], y[1], y[2], y[3]});
    };

    if (opt.record_natural && t_start >= opt.record_from)
        push(out.natural, t_start, y0);
    std::size_t si = 0;
    while (si < opt.sample_times.size() && opt.sample_times[si] <= t_start) {
        push(out.sampled, opt.sample_times[si], y0);
        ++si;
    }

    const auto fail = [&](std::string_view what) {
        const auto& y = eng.y();
        throw integration_error(
            "evolve_width: " + std::string(what),
            WidthState{eng.t_now(), y[0], y[1]});
    };

    const bool split = t_start < 0.0 && t_end > 0.0;
    const double legs[2] = {split ? 0.0 : t_end, t_end};
    for (int leg = split ? 0 : 1; leg < 2; ++leg) {
        while (!eng.done(legs[leg])) {
            if (out.steps + 1 > opt.max_steps)
                fail("maximum step count exceeded");
            if (!eng.step(legs[leg]))
                fail(eng.failure());
            ++out.steps;
            while (si < opt.sample_times.size()
                   && opt.sample_times[si] <= eng.t_now()) {
                double ys[4];
                eng.interpolate(opt.sample_times[si], ys);
                push(out.sampled, opt.sample_times[si], ys);
                ++si;
            }
            if (opt.record_natural && eng.t_now() >= opt.record_from)
                push(out.natural, eng.t_now(), eng.y().data());
        }
    }
    // samples within rounding of t_end that the last step left behind
    for (; si < opt.sample_times.size(); ++si)
        push(out.sampled, opt.sample_times[si], eng.y().data());

    out.rhs_evals = eng.stats().rhs_evals;
    return out;
}

} // namespace kz
