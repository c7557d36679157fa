#include "kzcycle/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace kz {

namespace {

double parse_double(const std::string& key, const std::string& text)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty()
        || !std::isfinite(v))
        throw config_error(key + ": cannot parse '" + text + "' as a number");
    return v;
}

int parse_int(const std::string& key, const std::string& text)
{
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty())
        throw config_error(key + ": cannot parse '" + text
                           + "' as an integer");
    return static_cast<int>(v);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

DeltaRange parse_delta_range(const std::string& text)
{
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw config_error("deltas: expected 'lo..hi' or 'lo..hi:n', got '"
                           + text + "'");
    DeltaRange r;
    const std::string lo = text.substr(0, dots);
    std::string rest = text.substr(dots + 2);
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
        r.n = parse_int("deltas", rest.substr(colon + 1));
        rest = rest.substr(0, colon);
    }
    r.lo = parse_double("deltas", lo);
    r.hi = parse_double("deltas", rest);
    if (!(r.lo > 0.0) || !(r.hi > r.lo))
        throw config_error("deltas: need 0 < lo < hi");
    if (r.n < 3)
        throw config_error("deltas: need at least 3 points");
    return r;
}

std::map<std::string, std::string> load_key_value_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw config_error("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno)
                               + " of '" + path + "' is not key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config: empty key on line "
                               + std::to_string(lineno));
        kv[key] = value;
    }
    return kv;
}

void apply_key_value(RunConfig& rc, const std::string& key,
                     const std::string& value)
{
    if (key == "znu")
        rc.znu = parse_double(key, value);
    else if (key == "delta")
        rc.delta = parse_double(key, value);
    else if (key == "t0")
        rc.t0 = parse_double(key, value);
    else if (key == "gamma")
        rc.gamma = parse_double(key, value);
    else if (key == "n-corr")
        rc.n_corr = parse_double(key, value);
    else if (key == "s-end")
        rc.s_end = parse_double(key, value);
    else if (key == "tol")
        rc.tol = parse_double(key, value);
    else if (key == "deltas")
        rc.deltas = parse_delta_range(value);
    else if (key == "out")
        rc.out = value;
    else if (key == "workers")
        rc.workers = parse_int(key, value);
    else if (key == "L")
        rc.L = parse_int(key, value);
    else if (key == "alpha")
        rc.alpha = parse_double(key, value);
    else if (key == "g")
        rc.g = parse_double(key, value);
    else
        throw config_error("config: unknown key '" + key + "'");
}

std::string format_g17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> sample_grid(double t_start, double t_end, int per_leg)
{
    if (!(t_end > t_start))
        throw config_error("sample_grid: need t_end > t_start");
    if (per_leg < 1)
        throw config_error("sample_grid: need at least one interval");
    std::vector<double> out;
    const auto leg = [&](double a, double b, bool skip_first) {
        for (int i = skip_first ? 1 : 0; i <= per_leg; ++i)
            out.push_back(i == per_leg ? b : a + (b - a) * i / per_leg);
    };
    if (t_start < 0.0 && t_end > 0.0) {
        out.reserve(2 * per_leg + 1);
        leg(t_start, 0.0, false);
        leg(0.0, t_end, true);
    } else {
        out.reserve(per_leg + 1);
        leg(t_start, t_end, false);
    }
    return out;
}

} // namespace kz
