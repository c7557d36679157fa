// Plumbing shared by the command-line tool and its tests: configuration
// merging, log-range parsing, sampling grids, and the fixed 17-digit
// numeric format every emitter uses.
#pragma once

#include "kzcycle/errors.hpp"

#include <map>
#include <string>
#include <vector>

namespace kz {

// Log-spaced scan range written as "lo..hi" or "lo..hi:n".
struct DeltaRange {
    double lo = 1e-3;
    double hi = 1e-1;
    int n = 8;
};

DeltaRange parse_delta_range(const std::string& text);

// Fully resolved invocation; defaults here are the documented ones.
struct RunConfig {
    std::string command;
    double znu = 1.0;
    double delta = 1.0;
    double t0 = 0.0;     // gap offset for the avoided-crossing drive
    double gamma = 0.0;  // strength of the correction term
    double n_corr = 4.0; // exponent of the correction term
    double s_end = 40.0; // horizon in units of the crossing time scale
    double tol = 1e-10;
    DeltaRange deltas;
    std::string out = "out";
    int workers = 1;
    // chain parameters, used by the spherical command only
    int L = 256;
    double alpha = 0.5;
    double g = 0.1;
};

// Flat key=value lines; blank lines and '#' comments are skipped.
std::map<std::string, std::string> load_key_value_file(
    const std::string& path);

// Apply one config-file entry.  Keys mirror the long flag names: znu,
// delta, t0, gamma, n-corr, s-end, tol, deltas, out, workers, L, alpha, g.
// Unknown keys and malformed values are config errors.
void apply_key_value(RunConfig& rc, const std::string& key,
                     const std::string& value);

// 17 significant digits: enough to round-trip any double exactly.
std::string format_g17(double x);

// Uniform sampling grid with per_leg intervals; when the span straddles
// zero the grid is built per side so the gapless instant is hit exactly.
std::vector<double> sample_grid(double t_start, double t_end,
                                int per_leg = 1000);

} // namespace kz
