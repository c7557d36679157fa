#include "kzcycle/spherical.hpp"
#include "kzcycle/dop853.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

namespace kz {

namespace {

// fixed-order reduction: identical result no matter how the mode loop is
// scheduled, and better conditioned than a running sum
double pairwise_sq_sum(const double* x, int n)
{
    if (n <= 8) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += x[i] * x[i];
        return s;
    }
    const int h = n / 2;
    return pairwise_sq_sum(x, h) + pairwise_sq_sum(x + h, n - h);
}

struct ChainRhs {
    const std::vector<double>* eps;
    Drive ramp; // (delta |t|)^{2 znu} part of the bare mass
    double mu_c;
    double g;
    bool parallel;

    int modes() const { return static_cast<int>(eps->size()); }

    double mass_of(double t, const double* y) const
    {
        const int n = modes();
        return mu_c + ramp.omega_sq(t)
            + g / (6.0 * n) * pairwise_sq_sum(y, n);
    }

    void operator()(double t, const double* y, double* dy) const
    {
        const int n = modes();
        for (int q = 0; q < n; ++q) {
            if (!(y[q] > 0.0)) {
                // poison so the integrator rejects and retries smaller
                const double nan = std::numeric_limits<double>::quiet_NaN();
                for (int i = 0; i < 3 * n + 1; ++i)
                    dy[i] = nan;
                return;
            }
        }
        const double mu = mass_of(t, y);
        const double* e = eps->data();
#pragma omp parallel for schedule(static) if (parallel)
        for (int q = 0; q < n; ++q) {
            const double xi = y[q];
            const double w2 = e[q] + mu;
            dy[q] = y[n + q];
            dy[n + q] = -w2 * xi + 1.0 / (4.0 * xi * xi * xi);
            // zeta ticks with the instantaneous frequency; clamp the brief
            // sub-zero excursions of the soft mode near the crossing
            dy[2 * n + q] = std::sqrt(std::max(w2, 0.0));
        }
        dy[3 * n] = 1.0 / (2.0 * y[0] * y[0]); // soft-mode phase
    }
};

} // namespace

std::vector<double> build_dispersion(int L, double alpha, double coupling)
{
    if (L < 4 || L > 4096 || L % 2 != 0)
        throw config_error("build_dispersion: L must be even and in [4, 4096]");
    if (!(alpha > 0.0))
        throw config_error("build_dispersion: alpha must be positive");
    if (!(coupling > 0.0))
        throw config_error("build_dispersion: coupling must be positive");

    const int rmax = L / 2 - 1;
    std::vector<double> jr(static_cast<std::size_t>(rmax) + 1, 0.0);
    double norm = 0.0;
    for (int r = 1; r <= rmax; ++r) {
        jr[r] = coupling * std::pow(static_cast<double>(r), -alpha);
        norm += jr[r];
    }
    // Kac rescaling keeps J(0) pinned at 1 when the bare sum would grow
    // with L; for alpha > 1 the sum converges on its own
    const double scale = alpha <= 1.0 ? 1.0 / norm : 1.0;

    std::vector<double> j(static_cast<std::size_t>(L), 0.0);
    for (int k = 0; k < L; ++k) {
        const double q = 2.0 * M_PI * k / L;
        double s = 0.0;
        for (int r = 1; r <= rmax; ++r)
            s += jr[r] * std::cos(q * r);
        j[k] = scale * s;
    }
    return j;
}

std::vector<double> mode_energies(const std::vector<double>& dispersion)
{
    if (dispersion.empty())
        throw config_error("mode_energies: empty dispersion");
    const double j0 = dispersion[0];
    std::vector<double> eps(dispersion.size());
    for (std::size_t k = 0; k < dispersion.size(); ++k)
        eps[k] = std::max(0.0, j0 - dispersion[k]);
    return eps;
}

double solve_mu_c(const std::vector<double>& energies, double g)
{
    if (energies.size() < 2)
        throw config_error("solve_mu_c: need at least two modes");
    if (!(g >= 0.0))
        throw config_error("solve_mu_c: g must be non-negative");
    const int L = static_cast<int>(energies.size());
    double s = 0.0;
    for (int q = 1; q < L; ++q) {
        if (!(energies[q] > 0.0))
            throw config_error(
                "solve_mu_c: gap closes away from q = 0, sum diverges");
        s += 1.0 / (2.0 * std::sqrt(energies[q]));
    }
    return -g / (6.0 * L) * s;
}

double equilibrium_mu_eff(const std::vector<double>& energies, double g,
                          double mu_bare)
{
    if (energies.empty())
        throw config_error("equilibrium_mu_eff: empty spectrum");
    if (!(g >= 0.0))
        throw config_error("equilibrium_mu_eff: g must be non-negative");
    if (!(mu_bare > 0.0))
        throw config_error(
            "equilibrium_mu_eff: bare mass must be positive (gapped side)");
    const int L = static_cast<int>(energies.size());
    const auto rhs = [&](double x) {
        double s = 0.0;
        for (int q = 0; q < L; ++q)
            s += 1.0 / (2.0 * std::sqrt(energies[q] + x));
        return mu_bare + g / (6.0 * L) * s;
    };
    double x = mu_bare;
    for (int it = 0; it < 200; ++it) {
        const double next = 0.5 * (x + rhs(x));
        const double move = std::abs(next - x);
        x = next;
        if (move <= 1e-10)
            return x;
    }
    throw convergence_error(
        "equilibrium_mu_eff: damped fixed point did not converge");
}

SphericalResult evolve_spherical(const SphericalConfig& c, double t_start,
                                 double t_end, const SphericalInit* init)
{
    if (!(t_end > t_start))
        throw config_error("spherical: need t_end > t_start");
    if (!(c.tol > 0.0) || c.tol > 1e-2)
        throw config_error("spherical: tol must lie in (0, 1e-2]");
    if (c.max_steps <= 0)
        throw config_error("spherical: max_steps must be positive");
    if (!(c.g >= 0.0))
        throw config_error("spherical: g must be non-negative");

    const auto eps = mode_energies(build_dispersion(c.L, c.alpha, c.coupling));
    const double mu_c = solve_mu_c(eps, c.g);
    const Drive ramp = make_power_law(c.znu, c.delta);
    const int L = c.L;
    const int n = 3 * L + 1;

    std::vector<double> y0(static_cast<std::size_t>(n), 0.0);
    if (init) {
        if (static_cast<int>(init->xi.size()) != L
            || static_cast<int>(init->xi_dot.size()) != L)
            throw config_error("spherical: init needs one entry per mode");
        for (int q = 0; q < L; ++q) {
            if (!(init->xi[q] > 0.0) || !std::isfinite(init->xi[q])
                || !std::isfinite(init->xi_dot[q]))
                throw config_error(
                    "spherical: initial widths must be positive and finite");
            y0[q] = init->xi[q];
            y0[L + q] = init->xi_dot[q];
        }
    } else {
        // adiabatic initial data with the equilibrium self-consistent mass;
        // its drift comes from a centred difference of the equilibrium map
        const double h = 1e-5 * std::max(1.0, std::abs(t_start));
        const double mu0 = mu_c + ramp.omega_sq(t_start);
        const double mlo = mu_c + ramp.omega_sq(t_start - h);
        const double mhi = mu_c + ramp.omega_sq(t_start + h);
        if (!(mu0 > 0.0) || !(mlo > 0.0) || !(mhi > 0.0))
            throw config_error(
                "spherical: start time sits at or past the crossing");
        const double eq = equilibrium_mu_eff(eps, c.g, mu0);
        const double eq_dot = (equilibrium_mu_eff(eps, c.g, mhi)
                               - equilibrium_mu_eff(eps, c.g, mlo))
            / (2.0 * h);
        for (int q = 0; q < L; ++q) {
            const double w = std::sqrt(eps[q] + eq);
            const double wdot = eq_dot / (2.0 * w);
            y0[q] = 1.0 / std::sqrt(2.0 * w);
            y0[L + q] = -wdot * std::pow(2.0 * w, -1.5);
        }
    }

    const ChainRhs rhs{&eps, ramp, mu_c, c.g, c.parallel};
    Dop853<ChainRhs> eng(rhs, n, c.tol);
    eng.start(t_start, y0.data());

    SphericalResult out;
    out.mu_c = mu_c;
    out.energies = eps;

    const auto record = [&](double t, const double* y) {
        const double mu = rhs.mass_of(t, y);
        if (mu < -c.tol)
            throw symmetric_phase_error(
                "spherical: self-consistent mass reached "
                + std::to_string(mu) + " at t = " + std::to_string(t)
                + "; the run left the symmetric phase");
        double lag = 0.0;
        for (int q = 1; q < L; ++q) {
            const double w = std::sqrt(eps[q] + std::max(mu, 0.0));
            lag += y[q] * y[q] - 1.0 / (2.0 * w);
        }
        lag *= c.g / (6.0 * L);
        out.times.push_back(t);
        out.mu_eff.push_back(mu);
        out.lag.push_back(lag);
        out.zero_mode.push_back({t, std::sqrt(std::max(mu, 0.0)), y[0], y[L],
                                 y[3 * L], y[2 * L]});
    };

    record(t_start, y0.data());

    const auto fail = [&](std::string_view what) {
        const auto& y = eng.y();
        throw integration_error("spherical: " + std::string(what),
                                WidthState{eng.t_now(), y[0], y[L]});
    };

    // land on t = 0 exactly so no step spans the kink of the ramp
    const bool split = t_start < 0.0 && t_end > 0.0;
    const double legs[2] = {split ? 0.0 : t_end, t_end};
    for (int leg = split ? 0 : 1; leg < 2; ++leg) {
        while (!eng.done(legs[leg])) {
            if (out.steps + 1 > c.max_steps)
                fail("maximum step count exceeded");
            if (!eng.step(legs[leg]))
                fail(eng.failure());
            ++out.steps;
            record(eng.t_now(), eng.y().data());
        }
    }

    out.final_states.resize(static_cast<std::size_t>(L));
    const auto& yf = eng.y();
    for (int q = 0; q < L; ++q)
        out.final_states[q] = {eng.t_now(), yf[q], yf[L + q]};
    out.rhs_evals = eng.stats().rhs_evals;
    return out;
}

double mean_abs_over(const std::vector<double>& times,
                     const std::vector<double>& values, double t_lo,
                     double t_hi)
{
    if (times.size() != values.size() || times.size() < 2)
        throw config_error("mean_abs_over: need matching series, >= 2 points");
    if (!(t_hi > t_lo))
        throw config_error("mean_abs_over: need t_hi > t_lo");
    if (t_lo < times.front() || t_hi > times.back())
        throw config_error("mean_abs_over: window outside recorded range");

    const auto value_at = [&](double t) {
        const auto it = std::lower_bound(times.begin(), times.end(), t);
        if (it == times.begin())
            return std::abs(values.front());
        const std::size_t i = static_cast<std::size_t>(it - times.begin());
        if (i == times.size())
            return std::abs(values.back());
        const double u = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return std::abs(values[i - 1] + u * (values[i] - values[i - 1]));
    };

    double integral = 0.0;
    double prev_t = t_lo;
    double prev_v = value_at(t_lo);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= t_lo)
            continue;
        const double t = std::min(times[i], t_hi);
        const double v = t < t_hi ? std::abs(values[i]) : value_at(t_hi);
        integral += 0.5 * (prev_v + v) * (t - prev_t);
        prev_t = t;
        prev_v = v;
        if (times[i] >= t_hi)
            break;
    }
    return integral / (t_hi - t_lo);
}

} // namespace kz
