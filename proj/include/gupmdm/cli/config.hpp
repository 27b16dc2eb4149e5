#pragma once

// Run configuration: flat `key = value` text with '#' comments. Every
// accepted configuration re-emits to text that parses back to an equal value.

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gupmdm/models.hpp"

namespace gupmdm::cli {

/// Configuration rejected before any numerical work (exit code 2).
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Model
{
    gup_oscillator,
    swanson,
};

enum class OutputFormat
{
    csv,
    json,
};

inline std::string
to_string(Model m)
{
    return m == Model::gup_oscillator ? "gup-oscillator" : "swanson";
}

inline std::string
to_string(OutputFormat f)
{
    return f == OutputFormat::csv ? "csv" : "json";
}

inline Model
parse_model(std::string const& s)
{
    if (s == "gup-oscillator") {
        return Model::gup_oscillator;
    }
    if (s == "swanson") {
        return Model::swanson;
    }
    throw ConfigError("unknown model '" + s + "' (expected gup-oscillator or swanson)");
}

inline OutputFormat
parse_format(std::string const& s)
{
    if (s == "csv") {
        return OutputFormat::csv;
    }
    if (s == "json") {
        return OutputFormat::json;
    }
    throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

/// Shortest-safe real formatting used by every emitted file: 17 significant digits.
inline std::string
format_real(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct RunConfig
{
    Model model = Model::gup_oscillator;
    double omega = 1.0;
    double tau = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    /// Half-width of the momentum window; default_p_max(omega) when unset.
    std::optional<double> pmax;
    long n = 2401;
    long k = 6;
    double tol_bisect = 1e-10;
    double tol_cross = 1e-6;
    bool extrapolate = true;
    double weight_cap = 1e12;
    OutputFormat format = OutputFormat::csv;
    std::string out;
    bool plot = false;
    long jobs = 1;
    /// Energy for effective-potential profiles.
    std::optional<double> energy;
    /// Optional eigenfunction table path (solve).
    std::string eigenfunctions;

    double effective_pmax() const { return pmax ? *pmax : default_p_max(omega); }

    friend bool operator==(RunConfig const&, RunConfig const&) = default;
};

struct SweepConfig
{
    RunConfig run;
    std::string param = "tau";
    double start = 0.0;
    double stop = 0.1;
    long count = 3;

    std::vector<double> values() const
    {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i) {
            v[static_cast<std::size_t>(i)] =
              i + 1 == count ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        return v;
    }

    friend bool operator==(SweepConfig const&, SweepConfig const&) = default;
};

using KeyValues = std::map<std::string, std::string>;

inline std::string
trim(std::string const& s)
{
    auto const b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    auto const e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline KeyValues
parse_key_values(std::string const& text)
{
    KeyValues kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto const hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto const eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

inline double
parse_real(std::string const& key, std::string const& value)
{
    try {
        std::size_t pos = 0;
        double const x = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return x;
    } catch (std::exception const&) {
        throw ConfigError("key '" + key + "': expected a real number, got '" + value + "'");
    }
}

inline long
parse_integer(std::string const& key, std::string const& value)
{
    try {
        std::size_t pos = 0;
        long const x = std::stol(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return x;
    } catch (std::exception const&) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
}

inline bool
parse_bool(std::string const& key, std::string const& value)
{
    if (value == "on" || value == "true" || value == "1") {
        return true;
    }
    if (value == "off" || value == "false" || value == "0") {
        return false;
    }
    throw ConfigError("key '" + key + "': expected on/off, got '" + value + "'");
}

/// Applies recognized run keys; returns the keys it did not recognize.
inline KeyValues
apply_run_keys(RunConfig& cfg, KeyValues const& kv)
{
    KeyValues rest;
    for (auto const& [key, value] : kv) {
        if (key == "model") {
            cfg.model = parse_model(value);
        } else if (key == "omega") {
            cfg.omega = parse_real(key, value);
        } else if (key == "tau") {
            cfg.tau = parse_real(key, value);
        } else if (key == "alpha") {
            cfg.alpha = parse_real(key, value);
        } else if (key == "beta") {
            cfg.beta = parse_real(key, value);
        } else if (key == "pmax") {
            cfg.pmax = parse_real(key, value);
        } else if (key == "n") {
            cfg.n = parse_integer(key, value);
        } else if (key == "k") {
            cfg.k = parse_integer(key, value);
        } else if (key == "tol_bisect") {
            cfg.tol_bisect = parse_real(key, value);
        } else if (key == "tol_cross") {
            cfg.tol_cross = parse_real(key, value);
        } else if (key == "extrapolate") {
            cfg.extrapolate = parse_bool(key, value);
        } else if (key == "weight_cap") {
            cfg.weight_cap = parse_real(key, value);
        } else if (key == "format") {
            cfg.format = parse_format(value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "plot") {
            cfg.plot = parse_bool(key, value);
        } else if (key == "jobs") {
            cfg.jobs = parse_integer(key, value);
        } else if (key == "energy") {
            cfg.energy = parse_real(key, value);
        } else if (key == "eigenfunctions") {
            cfg.eigenfunctions = value;
        } else {
            rest[key] = value;
        }
    }
    return rest;
}

inline KeyValues
apply_sweep_keys(SweepConfig& cfg, KeyValues const& kv)
{
    KeyValues rest;
    for (auto const& [key, value] : apply_run_keys(cfg.run, kv)) {
        if (key == "param") {
            cfg.param = value;
        } else if (key == "start") {
            cfg.start = parse_real(key, value);
        } else if (key == "stop") {
            cfg.stop = parse_real(key, value);
        } else if (key == "count") {
            cfg.count = parse_integer(key, value);
        } else {
            rest[key] = value;
        }
    }
    return rest;
}

inline void
reject_unknown(KeyValues const& rest)
{
    if (!rest.empty()) {
        throw ConfigError("unknown config key '" + rest.begin()->first + "'");
    }
}

inline RunConfig
parse_run_config(std::string const& text)
{
    RunConfig cfg;
    reject_unknown(apply_run_keys(cfg, parse_key_values(text)));
    return cfg;
}

inline SweepConfig
parse_sweep_config(std::string const& text)
{
    SweepConfig cfg;
    reject_unknown(apply_sweep_keys(cfg, parse_key_values(text)));
    return cfg;
}

/// Ordered key/value echo of a configuration (also used for JSON metadata).
inline std::vector<std::pair<std::string, std::string>>
to_key_values(RunConfig const& cfg)
{
    std::vector<std::pair<std::string, std::string>> kv{
      {"model", to_string(cfg.model)},
      {"omega", format_real(cfg.omega)},
      {"tau", format_real(cfg.tau)},
      {"alpha", format_real(cfg.alpha)},
      {"beta", format_real(cfg.beta)},
    };
    if (cfg.pmax) {
        kv.emplace_back("pmax", format_real(*cfg.pmax));
    }
    kv.emplace_back("n", std::to_string(cfg.n));
    kv.emplace_back("k", std::to_string(cfg.k));
    kv.emplace_back("tol_bisect", format_real(cfg.tol_bisect));
    kv.emplace_back("tol_cross", format_real(cfg.tol_cross));
    kv.emplace_back("extrapolate", cfg.extrapolate ? "on" : "off");
    kv.emplace_back("weight_cap", format_real(cfg.weight_cap));
    kv.emplace_back("format", to_string(cfg.format));
    if (!cfg.out.empty()) {
        kv.emplace_back("out", cfg.out);
    }
    kv.emplace_back("plot", cfg.plot ? "on" : "off");
    kv.emplace_back("jobs", std::to_string(cfg.jobs));
    if (cfg.energy) {
        kv.emplace_back("energy", format_real(*cfg.energy));
    }
    if (!cfg.eigenfunctions.empty()) {
        kv.emplace_back("eigenfunctions", cfg.eigenfunctions);
    }
    return kv;
}

inline std::vector<std::pair<std::string, std::string>>
to_key_values(SweepConfig const& cfg)
{
    auto kv = to_key_values(cfg.run);
    kv.emplace_back("param", cfg.param);
    kv.emplace_back("start", format_real(cfg.start));
    kv.emplace_back("stop", format_real(cfg.stop));
    kv.emplace_back("count", std::to_string(cfg.count));
    return kv;
}

template <typename Config>
std::string
to_config_text(Config const& cfg)
{
    std::string text;
    for (auto const& [key, value] : to_key_values(cfg)) {
        text += key + " = " + value + "\n";
    }
    return text;
}

inline GupOscillatorParams
gup_params(RunConfig const& cfg)
{
    try {
        return GupOscillatorParams(cfg.omega, cfg.tau);
    } catch (std::invalid_argument const& e) {
        throw ConfigError(e.what());
    }
}

inline SwansonParams
swanson_params(RunConfig const& cfg)
{
    try {
        return SwansonParams(cfg.omega, cfg.alpha, cfg.beta, cfg.tau);
    } catch (std::invalid_argument const& e) {
        throw ConfigError(e.what());
    }
}

/// Checks everything that can be checked without solving.
inline void
validate(RunConfig const& cfg)
{
    if (cfg.model == Model::gup_oscillator) {
        (void)gup_params(cfg);
        if (cfg.alpha != 0.0 || cfg.beta != 0.0) {
            throw ConfigError("alpha/beta apply to the swanson model only");
        }
    } else {
        (void)swanson_params(cfg);
    }
    double const pmax = cfg.effective_pmax();
    if (!std::isfinite(pmax) || !(pmax > 0.0)) {
        throw ConfigError("pmax > 0 required");
    }
    if (cfg.n < 5) {
        throw ConfigError("n >= 5 required");
    }
    if (cfg.extrapolate && cfg.n % 2 == 0) {
        throw ConfigError("n must be odd when extrapolate = on (coarse grid uses every other point)");
    }
    if (cfg.k < 1 || cfg.k > cfg.n / 4) {
        throw ConfigError("k must lie in [1, n/4]");
    }
    if (!(cfg.tol_bisect > 0.0) || !(cfg.tol_cross > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    if (!(cfg.weight_cap > 1.0)) {
        throw ConfigError("weight_cap > 1 required");
    }
    if (cfg.jobs < 1) {
        throw ConfigError("jobs >= 1 required");
    }
}

inline void
validate(SweepConfig const& cfg)
{
    static char const* const params[] = {"omega", "tau", "alpha", "beta", "pmax"};
    bool known = false;
    for (auto const* p : params) {
        known = known || cfg.param == p;
    }
    if (!known) {
        throw ConfigError("cannot sweep '" + cfg.param + "' (expected omega, tau, alpha, beta or pmax)");
    }
    if (cfg.count < 2) {
        throw ConfigError("sweep count >= 2 required");
    }
    if (!std::isfinite(cfg.start) || !std::isfinite(cfg.stop)) {
        throw ConfigError("sweep bounds must be finite");
    }
    validate(cfg.run);
}

inline RunConfig
with_parameter(RunConfig cfg, std::string const& param, double value)
{
    if (param == "omega") {
        cfg.omega = value;
    } else if (param == "tau") {
        cfg.tau = value;
    } else if (param == "alpha") {
        cfg.alpha = value;
    } else if (param == "beta") {
        cfg.beta = value;
    } else if (param == "pmax") {
        cfg.pmax = value;
    } else {
        throw ConfigError("cannot sweep '" + param + "'");
    }
    return cfg;
}

} // namespace gupmdm::cli
