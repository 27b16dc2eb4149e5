// gupmdm command-line front end.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gupmdm/cli/commands.hpp"

namespace {

using namespace gupmdm::cli;

/// Flags shared by every subcommand. Unset flags leave the config-file value alone.
struct Overrides
{
    std::string config_path;
    std::optional<std::string> model, format, out, eigenfunctions;
    std::optional<double> omega, tau, alpha, beta, pmax, energy;
    std::optional<long> n, k, jobs;
    bool plot = false;

    void attach(CLI::App& app, bool with_config = true)
    {
        if (with_config) {
            app.add_option("--config", config_path, "key = value configuration file");
        }
        app.add_option("--model", model, "gup-oscillator | swanson");
        app.add_option("--omega", omega, "oscillator frequency");
        app.add_option("--tau", tau, "deformation parameter (>= 0)");
        app.add_option("--alpha", alpha, "Swanson alpha");
        app.add_option("--beta", beta, "Swanson beta");
        app.add_option("--pmax", pmax, "half-width of the momentum window");
        app.add_option("--n", n, "grid points");
        app.add_option("--k", k, "number of eigenvalues");
        app.add_option("--format", format, "csv | json");
        app.add_option("--out", out, "output path (stdout when omitted)");
        app.add_flag("--plot", plot, "also write an SVG plot next to the output");
        app.add_option("--jobs", jobs, "concurrent sweep points");
    }

    void apply(RunConfig& cfg) const
    {
        if (model) cfg.model = parse_model(*model);
        if (format) cfg.format = parse_format(*format);
        if (out) cfg.out = *out;
        if (eigenfunctions) cfg.eigenfunctions = *eigenfunctions;
        if (omega) cfg.omega = *omega;
        if (tau) cfg.tau = *tau;
        if (alpha) cfg.alpha = *alpha;
        if (beta) cfg.beta = *beta;
        if (pmax) cfg.pmax = *pmax;
        if (energy) cfg.energy = *energy;
        if (n) cfg.n = *n;
        if (k) cfg.k = *k;
        if (jobs) cfg.jobs = *jobs;
        if (plot) cfg.plot = true;
    }
};

std::string
read_text(std::string const& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

RunConfig
load_run(Overrides const& o)
{
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : parse_run_config(read_text(o.config_path));
    o.apply(cfg);
    return cfg;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Momentum-dependent-mass eigenproblems of GUP-deformed oscillators"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version());

    Overrides solve_o, sweep_o, profile_o;
    std::optional<std::string> sweep_param;
    std::optional<double> sweep_start, sweep_stop;
    std::optional<long> sweep_count;
    std::string suite = "all", verify_out, which = "mass";

    auto* solve = app.add_subcommand("solve", "eigenvalue table with a shooting cross-check");
    solve_o.attach(*solve);
    solve->add_option("--eigenfunctions", solve_o.eigenfunctions, "also write fine-grid eigenfunctions as CSV");

    auto* sweep = app.add_subcommand("sweep", "solve over a linearly spaced parameter range");
    sweep_o.attach(*sweep);
    sweep->add_option("--param", sweep_param, "omega | tau | alpha | beta | pmax");
    sweep->add_option("--start", sweep_start, "first value");
    sweep->add_option("--stop", sweep_stop, "last value");
    sweep->add_option("--count", sweep_count, "number of values (>= 2)");

    auto* verify = app.add_subcommand("verify", "run a numerical verification suite");
    verify->add_option("--suite", suite, "vonroos | susy | hermitize | reduction | all");
    verify->add_option("--out", verify_out, "report path (stdout when omitted)");

    auto* profile = app.add_subcommand("profile", "mass or effective-potential profile");
    profile_o.attach(*profile);
    profile->add_option("--which", which, "mass | veff");
    profile->add_option("--energy", profile_o.energy, "energy for the veff profile");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_invalid;
    }

    if (solve->parsed()) {
        int rc = exit_ok;
        RunConfig cfg;
        rc = guarded(std::cerr, [&] {
            cfg = load_run(solve_o);
            return int{exit_ok};
        });
        return rc != exit_ok ? rc : cmd_solve(cfg, std::cout, std::cerr);
    }
    if (sweep->parsed()) {
        SweepConfig cfg;
        int const rc = guarded(std::cerr, [&] {
            cfg = sweep_o.config_path.empty() ? SweepConfig{} : parse_sweep_config(read_text(sweep_o.config_path));
            sweep_o.apply(cfg.run);
            if (sweep_param) cfg.param = *sweep_param;
            if (sweep_start) cfg.start = *sweep_start;
            if (sweep_stop) cfg.stop = *sweep_stop;
            if (sweep_count) cfg.count = *sweep_count;
            return int{exit_ok};
        });
        return rc != exit_ok ? rc : cmd_sweep(cfg, std::cout, std::cerr);
    }
    if (verify->parsed()) {
        return cmd_verify(suite, verify_out, std::cout, std::cerr);
    }
    RunConfig cfg;
    int const rc = guarded(std::cerr, [&] {
        cfg = load_run(profile_o);
        return int{exit_ok};
    });
    return rc != exit_ok ? rc : guarded(std::cerr, [&] {
        return cmd_profile(cfg, parse_profile_kind(which), std::cout, std::cerr);
    });
}
