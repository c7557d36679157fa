#include "kzcycle/kzm.hpp"

#include "kzcycle/analytic.hpp"
#include "kzcycle/ermakov.hpp"
#include "kzcycle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <utility>

namespace kz {

namespace {

constexpr double NAN_REF = std::numeric_limits<double>::quiet_NaN();

void check_workers(int workers)
{
    if (workers < 1)
        throw config_error("scan: worker count must be >= 1");
}

void check_positive_grid(const std::vector<double>& v, const char* what)
{
    if (v.empty())
        throw config_error(std::string(what) + ": empty parameter grid");
    for (double x : v)
        if (!(x > 0.0) || !std::isfinite(x))
            throw config_error(std::string(what)
                               + ": grid values must be positive and finite");
}

// Runs body(i) for i in [0, n); with workers > 1 the iterations fan out to an
// OpenMP pool.  Exceptions are captured per index and the first one (in input
// order) is rethrown after the loop so parallel and serial runs fail alike.
template <class Body>
void run_indexed(int n, int workers, Body&& body)
{
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

[[noreturn]] void rethrow_tagged(const char* param, double value,
                                 const integration_error& e)
{
    std::ostringstream os;
    os.precision(17);
    os << param << "=" << value << ": " << e.what();
    throw integration_error(os.str(), e.last);
}

// Full cycle with the given drive: adiabatic start, integrate to t_end,
// average the observables over the trailing window.  t_min floors the window
// at the freezing time of the drive's leading power law.
PlateauStats cycle_plateau(const Drive& d, double t_end, double tol)
{
    const double t_begin = adiabatic_start(d);
    EvolveOptions opt;
    opt.tol = tol;
    opt.record_from = 0.0; // the window never reaches into t < 0
    const auto traj =
        evolve_width(d, t_begin, t_end, adiabatic_init(d, t_begin), opt);
    const double t_min = freezing_time(make_power_law(d.znu, d.delta));
    return plateau_average(traj.natural, t_begin, t_end, t_min);
}

void push_plateau(ScanResult& out, const PlateauStats& st)
{
    out.n_exc_mean.push_back(st.n_exc_mean);
    out.n_exc_amp.push_back(st.n_exc_amp);
    out.fidelity_mean.push_back(st.fidelity_mean);
    out.fidelity_amp.push_back(st.fidelity_amp);
    out.heat_mean.push_back(st.heat_mean);
    out.heat_amp.push_back(st.heat_amp);
}

ScanResult assemble(const std::vector<double>& parameter,
                    const std::vector<PlateauStats>& stats,
                    const std::vector<double>& ref_n,
                    const std::vector<double>& ref_f)
{
    ScanResult out;
    out.parameter = parameter;
    for (const auto& st : stats)
        push_plateau(out, st);
    out.ref_n_exc = ref_n;
    out.ref_fidelity = ref_f;
    return out;
}

} // namespace

FitResult fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y)
{
    if (x.size() != y.size())
        throw config_error("fit_power_law: mismatched sequence lengths");
    if (x.size() < 3)
        throw config_error("fit_power_law: need at least 3 points");

    const int n = static_cast<int>(x.size());
    std::vector<double> lx(x.size()), ly(y.size());
    for (int i = 0; i < n; ++i) {
        if (!(x[static_cast<std::size_t>(i)] > 0.0)
            || !(y[static_cast<std::size_t>(i)] > 0.0)
            || !std::isfinite(x[static_cast<std::size_t>(i)])
            || !std::isfinite(y[static_cast<std::size_t>(i)]))
            throw config_error("fit_power_law: data must be positive and finite");
        lx[static_cast<std::size_t>(i)] = std::log(x[static_cast<std::size_t>(i)]);
        ly[static_cast<std::size_t>(i)] = std::log(y[static_cast<std::size_t>(i)]);
    }

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += lx[static_cast<std::size_t>(i)];
        my += ly[static_cast<std::size_t>(i)];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = lx[static_cast<std::size_t>(i)] - mx;
        sxx += dx * dx;
        sxy += dx * (ly[static_cast<std::size_t>(i)] - my);
    }
    if (!(sxx > 0.0))
        throw config_error("fit_power_law: degenerate abscissa grid");

    FitResult fit;
    fit.exponent = sxy / sxx;
    fit.prefactor = std::exp(my - fit.exponent * mx);
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ly[static_cast<std::size_t>(i)] - my
            - fit.exponent * (lx[static_cast<std::size_t>(i)] - mx);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.points_used = n;
    return fit;
}

std::vector<double> log_spaced(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw config_error("log_spaced: need 0 < lo < hi, finite");
    if (n < 2)
        throw config_error("log_spaced: need at least 2 points");
    std::vector<double> out(static_cast<std::size_t>(n));
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            lo * std::exp(ratio * i / (n - 1.0));
    out.front() = lo;
    out.back() = hi;
    return out;
}

HalfCycleResult half_cycle_heat_scan(double znu,
                                     const std::vector<double>& deltas,
                                     double tol, int workers,
                                     double start_constant)
{
    check_workers(workers);
    check_positive_grid(deltas, "half-cycle scan");
    if (deltas.size() < 3)
        throw config_error("half-cycle scan: need at least 3 rates to fit");
    const auto [lo_it, hi_it] = std::minmax_element(deltas.begin(), deltas.end());
    if (*hi_it / *lo_it < 31.6227766 * (1.0 - 1e-9))
        throw config_error("half-cycle scan: rates must span >= 1.5 decades");
    if (start_constant < 0.0 || !std::isfinite(start_constant))
        throw config_error("half-cycle scan: start constant must be >= 0");

    HalfCycleResult out;
    out.delta = deltas;
    out.heat.assign(deltas.size(), 0.0);
    out.frozen_heat.assign(deltas.size(), 0.0);

    // t_i = C/delta keeps the start frequency (C * delta/delta)^znu fixed
    // across the grid; anchoring C at the largest rate makes that rate (the
    // least adiabatic one) start exactly at the usual adiabatic margin, and
    // every smaller rate start deeper.
    double c = start_constant;
    if (c == 0.0)
        c = *hi_it * (-adiabatic_start(make_power_law(znu, *hi_it)));
    out.start_constant = c;

    run_indexed(static_cast<int>(deltas.size()), workers, [&](int i) {
        const double delta = deltas[static_cast<std::size_t>(i)];
        const auto d = make_power_law(znu, delta);
        const double t_i = -c / delta;
        EvolveOptions opt;
        opt.tol = tol;
        opt.record_natural = false;
        opt.sample_times = {0.0};
        try {
            const auto traj =
                evolve_width(d, t_i, 0.0, adiabatic_init(d, t_i), opt);
            const auto& end = traj.sampled.back();
            out.heat[static_cast<std::size_t>(i)] =
                excess_heat(0.0, end.xi, end.xi_dot);
        } catch (const integration_error& e) {
            rethrow_tagged("delta", delta, e);
        }
        const auto frozen = adiabatic_init(d, -freezing_time(d));
        out.frozen_heat[static_cast<std::size_t>(i)] =
            0.5 * (frozen.xi_dot * frozen.xi_dot
                   + 1.0 / (4.0 * frozen.xi * frozen.xi));
    });

    out.fit = fit_power_law(out.delta, out.heat);
    out.frozen_fit = fit_power_law(out.delta, out.frozen_heat);
    return out;
}

ScanResult full_cycle_scan(const std::vector<double>& znus, double s_end,
                           double tol, int workers)
{
    check_workers(workers);
    check_positive_grid(znus, "full-cycle scan");

    const int n = static_cast<int>(znus.size());
    std::vector<PlateauStats> stats(znus.size());
    std::vector<double> ref_n(znus.size()), ref_f(znus.size());

    run_indexed(n, workers, [&](int i) {
        const double znu = znus[static_cast<std::size_t>(i)];
        const auto d = make_power_law(znu, 1.0);
        try {
            stats[static_cast<std::size_t>(i)] = cycle_plateau(d, s_end, tol);
        } catch (const integration_error& e) {
            rethrow_tagged("znu", znu, e);
        }
        const double p = exponent_p(znu);
        ref_n[static_cast<std::size_t>(i)] = asymptotic_n_exc(p);
        ref_f[static_cast<std::size_t>(i)] = asymptotic_fidelity(p);
    });

    return assemble(znus, stats, ref_n, ref_f);
}

ScanResult rate_invariance_scan(double znu, const std::vector<double>& deltas,
                                double s_end, double tol, int workers)
{
    check_workers(workers);
    check_positive_grid(deltas, "rate scan");

    const double p = exponent_p(znu);
    std::vector<PlateauStats> stats(deltas.size());

    run_indexed(static_cast<int>(deltas.size()), workers, [&](int i) {
        const double delta = deltas[static_cast<std::size_t>(i)];
        const auto d = make_power_law(znu, delta);
        try {
            stats[static_cast<std::size_t>(i)] =
                cycle_plateau(d, s_end * time_scale(d), tol);
        } catch (const integration_error& e) {
            rethrow_tagged("delta", delta, e);
        }
    });

    return assemble(deltas, stats,
                    std::vector<double>(deltas.size(), asymptotic_n_exc(p)),
                    std::vector<double>(deltas.size(), asymptotic_fidelity(p)));
}

ScanResult gapped_cycle_scan(double znu, const std::vector<double>& s0s,
                             double s_end, double tol, int workers)
{
    check_workers(workers);
    if (s0s.empty())
        throw config_error("gapped scan: empty offset grid");
    for (double s0 : s0s)
        if (s0 < 0.0 || !std::isfinite(s0))
            throw config_error("gapped scan: offsets must be >= 0 and finite");

    const double p = exponent_p(znu);
    std::vector<PlateauStats> stats(s0s.size());
    std::vector<double> ref_n(s0s.size(), NAN_REF), ref_f(s0s.size(), NAN_REF);

    run_indexed(static_cast<int>(s0s.size()), workers, [&](int i) {
        const double s0 = s0s[static_cast<std::size_t>(i)];
        const auto d = s0 == 0.0 ? make_power_law(znu, 1.0)
                                 : make_gapped(znu, 1.0, s0);
        try {
            stats[static_cast<std::size_t>(i)] = cycle_plateau(d, s_end, tol);
        } catch (const integration_error& e) {
            rethrow_tagged("s0", s0, e);
        }
        if (s0 == 0.0) {
            ref_n[static_cast<std::size_t>(i)] = asymptotic_n_exc(p);
            ref_f[static_cast<std::size_t>(i)] = asymptotic_fidelity(p);
        }
    });

    return assemble(s0s, stats, ref_n, ref_f);
}

GappedDeltaResult gapped_delta_scan(double znu, double t0,
                                    const std::vector<double>& deltas,
                                    double tol, int workers)
{
    check_workers(workers);
    check_positive_grid(deltas, "gapped rate scan");
    if (deltas.size() < 3)
        throw config_error("gapped rate scan: need at least 3 rates to fit");
    if (!(t0 > 0.0) || !std::isfinite(t0))
        throw config_error("gapped rate scan: gap offset must be positive");

    GappedDeltaResult out;
    out.delta = deltas;
    out.n_exc.assign(deltas.size(), 0.0);

    run_indexed(static_cast<int>(deltas.size()), workers, [&](int i) {
        const double delta = deltas[static_cast<std::size_t>(i)];
        const auto d = make_gapped(znu, delta, t0);
        const double t_i = adiabatic_start(d);
        EvolveOptions opt;
        opt.tol = tol;
        opt.record_natural = false;
        opt.sample_times = {0.0};
        try {
            const auto traj =
                evolve_width(d, t_i, 0.0, adiabatic_init(d, t_i), opt);
            const auto& end = traj.sampled.back();
            out.n_exc[static_cast<std::size_t>(i)] =
                excitation_number(d.omega(0.0), end.xi, end.xi_dot);
        } catch (const integration_error& e) {
            rethrow_tagged("delta", delta, e);
        }
    });

    out.fit = fit_power_law(out.delta, out.n_exc);
    return out;
}

ScanResult universality_scan(double znu, const std::vector<double>& gammas,
                             double n_corr, double s_end, double tol,
                             int workers)
{
    check_workers(workers);
    if (gammas.empty())
        throw config_error("universality scan: empty gamma grid");
    for (double g : gammas)
        if (g < 0.0 || !std::isfinite(g))
            throw config_error("universality scan: gamma must be >= 0");
    if (!(n_corr > 2.0 * znu))
        throw config_error(
            "universality scan: correction power must exceed 2*znu");

    const double p = exponent_p(znu);
    std::vector<PlateauStats> stats(gammas.size());

    run_indexed(static_cast<int>(gammas.size()), workers, [&](int i) {
        const double gamma = gammas[static_cast<std::size_t>(i)];
        const auto d = gamma == 0.0 ? make_power_law(znu, 1.0)
                                    : make_corrected(znu, 1.0, gamma, n_corr);
        try {
            stats[static_cast<std::size_t>(i)] = cycle_plateau(d, s_end, tol);
        } catch (const integration_error& e) {
            rethrow_tagged("gamma", gamma, e);
        }
    });

    return assemble(gammas, stats,
                    std::vector<double>(gammas.size(), asymptotic_n_exc(p)),
                    std::vector<double>(gammas.size(), asymptotic_fidelity(p)));
}

} // namespace kz
