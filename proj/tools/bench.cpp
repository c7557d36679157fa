// Times the chain evolution with the OpenMP mode loop on and off.
// The two paths must agree bitwise; a mismatch is reported as such.

#include "kzcycle/drive.hpp"
#include "kzcycle/spherical.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using kz::SphericalConfig;
using kz::SphericalResult;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now()
                                         - t0)
        .count();
}

struct Timed {
    SphericalResult result;
    double seconds = 0.0;
};

Timed run_once(const SphericalConfig& base, bool parallel)
{
    SphericalConfig c = base;
    c.parallel = parallel;
    const auto ramp = kz::make_power_law(c.znu, c.delta);
    const double t_begin = kz::adiabatic_start(ramp);
    const double t_end = 10.0 * kz::time_scale(ramp);
    const auto t0 = std::chrono::steady_clock::now();
    auto r = kz::evolve_spherical(c, t_begin, t_end);
    return {std::move(r), seconds_since(t0)};
}

// best of n, keeping the first run's result for the agreement check
Timed best_of(const SphericalConfig& base, bool parallel, int reps)
{
    Timed best = run_once(base, parallel);
    for (int i = 1; i < reps; ++i) {
        const double s = run_once(base, parallel).seconds;
        if (s < best.seconds)
            best.seconds = s;
    }
    return best;
}

bool identical(const SphericalResult& a, const SphericalResult& b)
{
    if (a.steps != b.steps || a.mu_eff != b.mu_eff)
        return false;
    if (a.final_states.size() != b.final_states.size())
        return false;
    for (std::size_t q = 0; q < a.final_states.size(); ++q)
        if (a.final_states[q].xi != b.final_states[q].xi
            || a.final_states[q].xi_dot != b.final_states[q].xi_dot)
            return false;
    return true;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<int> sizes;
    for (int i = 1; i < argc; ++i)
        sizes.push_back(std::atoi(argv[i]));
    if (sizes.empty())
        sizes = {64, 256, 1024};

#ifdef _OPENMP
    std::printf("# OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("# built without OpenMP; both columns run serially\n");
#endif
    std::printf("# chain ramp: znu=1 delta=0.1, horizon 10 time units\n");
    std::printf("%6s %10s %12s %12s %9s %7s\n", "L", "steps", "serial_s",
                "openmp_s", "speedup", "match");

    bool all_match = true;
    for (const int L : sizes) {
        SphericalConfig base;
        base.L = L;
        base.znu = 1.0;
        base.delta = 0.1;
        const auto serial = best_of(base, false, 2);
        const auto openmp = best_of(base, true, 2);
        const bool match = identical(serial.result, openmp.result);
        all_match = all_match && match;
        std::printf("%6d %10lld %12.4f %12.4f %9.2f %7s\n", L,
                    static_cast<long long>(serial.result.steps),
                    serial.seconds, openmp.seconds,
                    serial.seconds / openmp.seconds,
                    match ? "yes" : "NO");
    }
    if (!all_match) {
        std::fprintf(stderr,
                     "error: parallel and serial results disagree\n");
        return 1;
    }
    return 0;
}
