// Command-line front end: parses flags and optional key=value config files,
// dispatches the experiment, and emits deterministic CSV/JSON artifacts.
#include "kzcycle/analytic.hpp"
#include "kzcycle/cli.hpp"
#include "kzcycle/drive.hpp"
#include "kzcycle/ermakov.hpp"
#include "kzcycle/kzm.hpp"
#include "kzcycle/observables.hpp"
#include "kzcycle/specfun.hpp"
#include "kzcycle/spherical.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

using nlohmann::ordered_json;
using namespace kz;

namespace {

double wall_now()
{
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

ordered_json config_json(const RunConfig& rc)
{
    ordered_json j;
    j["command"] = rc.command;
    j["znu"] = rc.znu;
    j["delta"] = rc.delta;
    j["t0"] = rc.t0;
    j["gamma"] = rc.gamma;
    j["n_corr"] = rc.n_corr;
    j["s_end"] = rc.s_end;
    j["tol"] = rc.tol;
    j["deltas"] = {{"lo", rc.deltas.lo}, {"hi", rc.deltas.hi},
                   {"n", rc.deltas.n}};
    j["out"] = rc.out;
    j["workers"] = rc.workers;
    j["L"] = rc.L;
    j["alpha"] = rc.alpha;
    j["g"] = rc.g;
    return j;
}

ordered_json fit_json(const FitResult& f)
{
    return {{"exponent", f.exponent},
            {"prefactor", f.prefactor},
            {"residual", f.residual},
            {"points_used", f.points_used}};
}

ordered_json plateau_json(const PlateauStats& st)
{
    ordered_json j;
    j["t_begin"] = st.t_begin;
    j["t_end"] = st.t_end;
    j["periods"] = st.periods;
    j["points"] = st.points;
    j["n_exc"] = {{"mean", st.n_exc_mean}, {"amplitude", st.n_exc_amp}};
    j["fidelity"] = {{"mean", st.fidelity_mean},
                     {"amplitude", st.fidelity_amp}};
    j["heat"] = {{"mean", st.heat_mean}, {"amplitude", st.heat_amp}};
    return j;
}

std::string trajectory_csv(double time_unit,
                           const std::vector<TrajectoryPoint>& pts)
{
    std::string s = "t,s,omega,xi,xi_dot,n_exc,fidelity,heat,phase\n";
    for (const auto& pt : pts) {
        s += format_g17(pt.t);
        s += ',';
        s += format_g17(pt.t / time_unit);
        s += ',';
        s += format_g17(pt.omega);
        s += ',';
        s += format_g17(pt.xi);
        s += ',';
        s += format_g17(pt.xi_dot);
        s += ',';
        s += format_g17(excitation_number(pt.omega, pt.xi, pt.xi_dot));
        s += ',';
        s += format_g17(fidelity(pt.omega, pt.xi, pt.xi_dot));
        s += ',';
        s += format_g17(excess_heat(pt.omega, pt.xi, pt.xi_dot));
        s += ',';
        s += format_g17(pt.phase);
        s += '\n';
    }
    return s;
}

using NamedFiles = std::vector<std::pair<std::string, std::string>>;

// All content is assembled before anything is written, so a failed run
// leaves no partial artifacts; a failed write cleans up after itself.
void write_outputs(const RunConfig& rc, const NamedFiles& files)
{
    namespace fs = std::filesystem;
    const fs::path dir(rc.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw config_error("out: cannot create directory '" + rc.out + "'");
    std::vector<fs::path> written;
    try {
        for (const auto& [name, content] : files) {
            const fs::path p = dir / name;
            std::ofstream o(p, std::ios::binary);
            if (!o)
                throw config_error("out: cannot open '" + p.string() + "'");
            o << content;
            o.flush();
            if (!o)
                throw config_error("out: write failed for '" + p.string()
                                   + "'");
            written.push_back(p);
        }
    } catch (...) {
        for (const auto& p : written)
            fs::remove(p);
        throw;
    }
}

// common body of the four single-trajectory commands
void run_cycle(const RunConfig& rc, const Drive& d, double t_end,
               bool with_refs, bool with_plateau, ordered_json& results,
               NamedFiles& files)
{
    const double t_begin = adiabatic_start(d);
    EvolveOptions opt;
    opt.tol = rc.tol;
    opt.record_from = 0.0; // the trailing window only needs t >= 0
    opt.record_natural = with_plateau;
    opt.sample_times = sample_grid(t_begin, t_end);
    const auto traj
        = evolve_width(d, t_begin, t_end, adiabatic_init(d, t_begin), opt);

    results["t_begin"] = t_begin;
    results["t_end"] = t_end;
    results["steps"] = traj.steps;
    if (with_plateau) {
        const double t_min = freezing_time(make_power_law(rc.znu, rc.delta));
        const auto st = plateau_average(traj.natural, t_begin, t_end, t_min);
        results["plateau"] = plateau_json(st);
        if (with_refs) {
            const double p = exponent_p(rc.znu);
            const double ref_n = asymptotic_n_exc(p);
            const double ref_f = asymptotic_fidelity(p);
            results["reference"] = {{"n_exc", ref_n}, {"fidelity", ref_f}};
            results["deviation"]
                = {{"n_exc_rel", st.n_exc_mean / ref_n - 1.0},
                   {"fidelity_rel", st.fidelity_mean / ref_f - 1.0}};
        }
    }
    files.emplace_back("trajectory.csv", trajectory_csv(time_scale(d),
                                                        traj.sampled));
}

void cmd_half_cycle(const RunConfig& rc, ordered_json& results,
                    NamedFiles& files)
{
    const Drive d = make_power_law(rc.znu, rc.delta);
    const double t_begin = adiabatic_start(d);
    EvolveOptions opt;
    opt.tol = rc.tol;
    opt.record_natural = false;
    opt.sample_times = sample_grid(t_begin, 0.0);
    const auto traj
        = evolve_width(d, t_begin, 0.0, adiabatic_init(d, t_begin), opt);

    const auto& end = traj.sampled.back();
    const double ts = freezing_time(d);
    const auto frozen = adiabatic_init(d, -ts);
    results["t_begin"] = t_begin;
    results["freezing_time"] = ts;
    results["heat"] = excess_heat(0.0, end.xi, end.xi_dot);
    results["frozen_heat"] = 0.5
        * (frozen.xi_dot * frozen.xi_dot
           + 1.0 / (4.0 * frozen.xi * frozen.xi));
    results["reference_exponent"] = kzm_heat_exponent(rc.znu);
    files.emplace_back("trajectory.csv",
                       trajectory_csv(time_scale(d), traj.sampled));
}

void cmd_kzm_fit(const RunConfig& rc, ordered_json& results)
{
    const auto grid = log_spaced(rc.deltas.lo, rc.deltas.hi, rc.deltas.n);
    const auto scan
        = half_cycle_heat_scan(rc.znu, grid, rc.tol, rc.workers);
    results["delta"] = scan.delta;
    results["heat"] = scan.heat;
    results["frozen_heat"] = scan.frozen_heat;
    results["start_constant"] = scan.start_constant;
    results["fit"] = fit_json(scan.fit);
    results["frozen_fit"] = fit_json(scan.frozen_fit);
    const double ref = kzm_heat_exponent(rc.znu);
    results["reference_exponent"] = ref;
    results["exponent_deviation"] = scan.fit.exponent - ref;
}

void cmd_spherical(const RunConfig& rc, ordered_json& results,
                   NamedFiles& files)
{
    SphericalConfig sc;
    sc.L = rc.L;
    sc.alpha = rc.alpha;
    sc.g = rc.g;
    sc.znu = rc.znu;
    sc.delta = rc.delta;
    sc.tol = rc.tol;
    sc.parallel = rc.workers > 1;
    const Drive ramp = make_power_law(rc.znu, rc.delta);
    const double t_begin = adiabatic_start(ramp);
    const double t_end = rc.s_end * time_scale(ramp);
    const auto r = evolve_spherical(sc, t_begin, t_end);

    const double ts = freezing_time(ramp);
    const auto st = plateau_average(r.zero_mode, t_begin, t_end, ts);
    const double p = exponent_p(rc.znu);
    const double ref_n = asymptotic_n_exc(p);
    results["mu_c"] = r.mu_c;
    results["t_begin"] = t_begin;
    results["t_end"] = t_end;
    results["steps"] = r.steps;
    results["plateau"] = plateau_json(st);
    results["reference"] = {{"n_exc", ref_n},
                            {"fidelity", asymptotic_fidelity(p)}};
    results["deviation"] = {{"n_exc_rel", st.n_exc_mean / ref_n - 1.0}};
    results["lag_mean"] = mean_abs_over(r.times, r.lag, -ts, ts);
    files.emplace_back("zero_mode.csv",
                       trajectory_csv(time_scale(ramp), r.zero_mode));

    std::string mu = "t,s,mu_eff,lag\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        mu += format_g17(r.times[i]);
        mu += ',';
        mu += format_g17(r.times[i] / time_scale(ramp));
        mu += ',';
        mu += format_g17(r.mu_eff[i]);
        mu += ',';
        mu += format_g17(r.lag[i]);
        mu += '\n';
    }
    files.emplace_back("mu_eff.csv", std::move(mu));

    // per-mode snapshot at the end of the run
    const double mu_end = r.mu_eff.back();
    std::string modes = "q,energy,omega,xi,xi_dot,n_exc\n";
    for (std::size_t q = 0; q < r.final_states.size(); ++q) {
        const double w = q == 0 ? std::sqrt(std::max(mu_end, 0.0))
                                : std::sqrt(r.energies[q] + mu_end);
        const auto& st = r.final_states[q];
        modes += std::to_string(q);
        modes += ',';
        modes += format_g17(r.energies[q]);
        modes += ',';
        modes += format_g17(w);
        modes += ',';
        modes += format_g17(st.xi);
        modes += ',';
        modes += format_g17(st.xi_dot);
        modes += ',';
        modes += format_g17(excitation_number(w, st.xi, st.xi_dot));
        modes += '\n';
    }
    files.emplace_back("modes.csv", std::move(modes));
}

int cmd_verify()
{
    bool all_ok = true;
    const auto report = [&](const char* name, bool ok,
                            const std::string& detail) {
        std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name,
                    detail.c_str());
        all_ok = all_ok && ok;
    };

    { // closed form against direct integration started from it
        double worst = 0.0;
        for (const double znu : {0.5, 1.0, 2.0}) {
            const double p = exponent_p(znu);
            const Drive d = make_power_law(znu, 1.0);
            const auto init = xi_analytic(p, -20.0);
            EvolveOptions opt;
            opt.record_natural = false;
            opt.sample_times = sample_grid(-20.0, 20.0, 400);
            const auto traj = evolve_width(d, -20.0, 20.0,
                                           {init.xi, init.xi_dot}, opt);
            for (const auto& pt : traj.sampled) {
                const auto ana = xi_analytic(p, pt.t);
                worst = std::max(worst,
                                 std::abs(pt.xi - ana.xi) / std::abs(ana.xi));
            }
        }
        report("analytic-numeric", worst <= 1e-6,
               "max rel err " + format_g17(worst));
    }

    { // conserved bracket of the oscillatory pair
        double worst = 0.0;
        for (int ip = 1; ip <= 10; ++ip) {
            const double p = 0.05 * ip;
            const double ref
                = 2.0 / M_PI * std::sqrt(p) * std::sin(p * M_PI);
            for (int it = 0; it <= 60; ++it) {
                const double t = 0.1 + (30.0 - 0.1) * it / 60.0;
                const auto ap = specfun::airy_gen(p, t);
                const double w = ap.ai_deriv * ap.bi - ap.ai * ap.bi_deriv;
                worst = std::max(worst, std::abs(w - ref) / ref);
            }
        }
        report("wronskian", worst <= 1e-8, "max rel err " + format_g17(worst));
    }

    { // plateau pairing under p -> 1/2 - p
        double worst = 0.0;
        for (int ip = 1; ip <= 9; ++ip) {
            const double p = 0.05 * ip;
            const double q = 0.5 - p;
            worst = std::max(worst, std::abs(asymptotic_n_exc(p)
                                                 * asymptotic_n_exc(q)
                                             - 1.0));
            const double fp = asymptotic_fidelity(p);
            const double fq = asymptotic_fidelity(q);
            worst = std::max(worst, std::abs(fp * fp + fq * fq - 1.0));
        }
        report("duality", worst <= 1e-12, "max err " + format_g17(worst));
    }

    { // state identities along a full crossing
        const Drive d = make_power_law(1.0, 1.0);
        EvolveOptions opt;
        const auto traj
            = evolve_width(d, -5.0, 40.0, adiabatic_init(d, -5.0), opt);
        double worst = 0.0;
        for (const auto& pt : traj.natural) {
            if (!(pt.omega > 0.0))
                continue;
            const double n = excitation_number(pt.omega, pt.xi, pt.xi_dot);
            const double f = fidelity(pt.omega, pt.xi, pt.xi_dot);
            const double q = excess_heat(pt.omega, pt.xi, pt.xi_dot);
            worst = std::max(worst, std::abs(1.0 / (f * f) - n - 1.0));
            worst = std::max(worst, std::abs(q - pt.omega * n));
        }
        const auto& end = traj.natural.back();
        const double n_end
            = excitation_number(end.omega, end.xi, end.xi_dot);
        const auto probs
            = excitation_distribution(end.omega, end.xi, end.xi_dot, 400);
        double moment = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k)
            moment += static_cast<double>(k) * probs[k];
        const double merr = std::abs(moment - n_end);
        report("identities", worst <= 1e-12 && merr <= 1e-8,
               "max err " + format_g17(worst) + ", moment err "
                   + format_g17(merr));
    }

    return all_ok ? 0 : 3;
}

int dispatch(RunConfig& rc)
{
    if (rc.command == "verify")
        return cmd_verify();

    if (rc.workers < 1)
        throw config_error("workers: need at least one");
    if (!(rc.s_end > 0.0))
        throw config_error("s-end: must be positive");

    const double wall0 = wall_now();
    ordered_json results;
    NamedFiles files;

    if (rc.command == "half-cycle") {
        cmd_half_cycle(rc, results, files);
    } else if (rc.command == "full-cycle") {
        const Drive d = make_power_law(rc.znu, rc.delta);
        run_cycle(rc, d, rc.s_end * time_scale(d), true, true, results,
                  files);
    } else if (rc.command == "gapped") {
        if (rc.t0 < 0.0)
            throw config_error("t0: must be non-negative");
        const Drive d = rc.t0 == 0.0
            ? make_power_law(rc.znu, rc.delta)
            : make_gapped(rc.znu, rc.delta, rc.t0);
        run_cycle(rc, d, rc.s_end * time_scale(d), rc.t0 == 0.0, true,
                  results, files);
    } else if (rc.command == "universality") {
        const Drive d = rc.gamma == 0.0
            ? make_power_law(rc.znu, rc.delta)
            : make_corrected(rc.znu, rc.delta, rc.gamma, rc.n_corr);
        run_cycle(rc, d, rc.s_end * time_scale(d), true, true, results,
                  files);
    } else if (rc.command == "kzm-fit") {
        cmd_kzm_fit(rc, results);
    } else if (rc.command == "spherical") {
        cmd_spherical(rc, results, files);
    } else {
        throw config_error("unknown command '" + rc.command + "'");
    }

    ordered_json summary;
    summary["command"] = rc.command;
    summary["config"] = config_json(rc);
    summary["results"] = results;
    summary["wall_seconds"] = wall_now() - wall0;
    files.emplace_back("summary.json", summary.dump(2) + "\n");
    write_outputs(rc, files);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig rc;
    std::string deltas_text;
    std::string config_path;

    CLI::App app{"Driven-crossing width dynamics toolkit"};
    app.require_subcommand(1);

    const std::pair<const char*, const char*> commands[] = {
        {"half-cycle", "single ramp into the gapless point"},
        {"full-cycle", "single ramp through the gapless point"},
        {"gapped", "cycle with an avoided crossing of offset t0"},
        {"universality", "cycle with a subleading drive correction"},
        {"kzm-fit", "rate scan of half-cycle heat with a power-law fit"},
        {"spherical", "self-consistent chain with a soft mode"},
        {"verify", "cross-validation suite; exit 3 on any failure"},
    };
    for (const auto& [name, desc] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--znu", rc.znu, "distance exponent of the gap");
        sub->add_option("--delta", rc.delta, "ramp rate");
        sub->add_option("--t0", rc.t0, "gap offset (gapped command)");
        sub->add_option("--gamma", rc.gamma, "correction strength");
        sub->add_option("--n-corr", rc.n_corr, "correction exponent");
        sub->add_option("--s-end", rc.s_end, "horizon in rescaled time");
        sub->add_option("--tol", rc.tol, "integrator tolerance");
        sub->add_option("--deltas", deltas_text,
                        "rate range lo..hi[:n] for scans");
        sub->add_option("--out", rc.out, "output directory");
        sub->add_option("--workers", rc.workers, "worker pool size");
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--L", rc.L, "chain size (spherical)");
        sub->add_option("--alpha", rc.alpha, "coupling decay (spherical)");
        sub->add_option("--g", rc.g, "quartic coupling (spherical)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    rc.command = sub->get_name();

    try {
        if (sub->count("--config") > 0) {
            for (const auto& [key, value] : load_key_value_file(config_path)) {
                const std::string flag = "--" + key;
                // flags override file entries
                if (sub->get_option_no_throw(flag) != nullptr
                    && sub->count(flag) > 0)
                    continue;
                apply_key_value(rc, key, value);
            }
        }
        if (sub->count("--deltas") > 0)
            rc.deltas = parse_delta_range(deltas_text);
        return dispatch(rc);
    } catch (const config_error& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const integration_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const convergence_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const window_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const symmetric_phase_error& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
}
