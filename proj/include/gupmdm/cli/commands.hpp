#pragma once

// Implementations of the solve / sweep / verify / profile subcommands.
// Every command returns a process exit code; diagnostics go to the supplied
// error stream and tables go to --out or the supplied output stream.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gupmdm/cli/config.hpp"
#include "gupmdm/cli/output.hpp"
#include "gupmdm/models.hpp"
#include "gupmdm/solver.hpp"
#include "gupmdm/verify.hpp"

namespace gupmdm::cli {

enum ExitCode : int
{
    exit_ok = 0,
    exit_verification_failed = 1,
    exit_config_invalid = 2,
    exit_solver_failed = 3,
};

/// Runs fn, translating exceptions into exit codes with a message on err.
inline int
guarded(std::ostream& err, std::function<int()> const& fn)
{
    try {
        return fn();
    } catch (ConfigError const& e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return exit_config_invalid;
    } catch (std::invalid_argument const& e) {
        err << "error: invalid configuration: " << e.what() << "\n";
        return exit_config_invalid;
    } catch (SolverError const& e) {
        err << "error: solver failure: " << e.what() << "\n";
        return exit_solver_failed;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return exit_solver_failed;
    }
}

/// Problem assembled from a run configuration.
struct Problem
{
    std::function<SturmLiouvilleProblem(Grid const&)> build;
    EnergyMap map;
};

inline Problem
make_problem(RunConfig const& cfg)
{
    if (cfg.model == Model::gup_oscillator) {
        auto const params = gup_params(cfg);
        return {[params](Grid const& g) { return gup_oscillator_sl(params, g); }, energy_map(params)};
    }
    auto const params = swanson_params(cfg);
    double const cap = cfg.weight_cap;
    return {[params, cap](Grid const& g) { return swanson_sl(params, g, cap); }, energy_map(params)};
}

struct Level
{
    long index = 0;
    double lambda = 0.0;
    double energy = 0.0;
    double energy_shooting = 0.0;
    double abs_diff = 0.0;
};

struct SolveResult
{
    std::vector<Level> levels;
    Spectrum fine;
};

/// Matrix eigenvalues (Richardson-combined when extrapolate is on) plus a
/// shooting cross-check on the fine grid.
inline SolveResult
solve_levels(RunConfig const& cfg)
{
    validate(cfg);
    auto const problem = make_problem(cfg);
    auto const grid = symmetric_grid(cfg.effective_pmax(), static_cast<std::size_t>(cfg.n));
    auto const k = static_cast<std::size_t>(cfg.k);
    auto const slp = problem.build(grid);

    SolveResult result;
    result.fine = eigen_solve(slp, k);
    std::vector<double> lambdas = result.fine.eigenvalues;
    if (cfg.extrapolate) {
        auto const coarse = eigen_solve(problem.build(grid.coarsened()), k);
        for (std::size_t j = 0; j < k; ++j) {
            lambdas[j] = richardson(coarse.eigenvalues[j], lambdas[j]);
        }
    }

    ShootingOptions opts;
    opts.tolerance = cfg.tol_bisect;
    for (std::size_t j = 0; j < k; ++j) {
        auto const shot = shooting_eigenvalue(slp, static_cast<int>(j), opts);
        Level lv;
        lv.index = static_cast<long>(j);
        lv.lambda = lambdas[j];
        lv.energy = problem.map.energy(lambdas[j]);
        lv.energy_shooting = problem.map.energy(shot.eigenvalue);
        lv.abs_diff = std::abs(lv.energy - lv.energy_shooting);
        result.levels.push_back(lv);
    }
    return result;
}

inline Table
level_table(std::vector<Level> const& levels)
{
    Table t{{"index", "lambda", "E", "E_shooting", "abs_diff"}, {}};
    for (auto const& lv : levels) {
        t.rows.push_back({lv.index, lv.lambda, lv.energy, lv.energy_shooting, lv.abs_diff});
    }
    return t;
}

/// Configuration echo for output metadata, without the output paths.
template <typename Config>
std::vector<std::pair<std::string, std::string>>
metadata_echo(Config const& cfg)
{
    auto kv = to_key_values(cfg);
    std::erase_if(kv, [](auto const& entry) { return entry.first == "out" || entry.first == "eigenfunctions"; });
    return kv;
}

inline void
emit(std::string const& text, std::string const& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
    } else {
        write_file(path, text);
    }
}

inline std::string
plot_path(std::string const& out, std::string const& fallback)
{
    return out.empty() ? fallback : with_extension(out, ".svg");
}

inline int
cmd_solve(RunConfig const& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        auto const result = solve_levels(cfg);
        for (auto const& lv : result.levels) {
            double const rel = lv.abs_diff / std::max(1.0, std::abs(lv.energy));
            if (rel > cfg.tol_cross) {
                err << "warning: level " << lv.index << " matrix/shooting mismatch " << format_real(rel)
                    << " exceeds tol_cross " << format_real(cfg.tol_cross) << "\n";
            }
        }
        emit(render(level_table(result.levels), cfg.format, "solve", metadata_echo(cfg)), cfg.out, out);

        if (!cfg.eigenfunctions.empty()) {
            Table ef{{"p"}, {}};
            for (std::size_t j = 0; j < result.fine.size(); ++j) {
                ef.columns.push_back("phi_" + std::to_string(j));
            }
            auto const& g = result.fine.eigenfunctions.front().grid();
            for (std::size_t i = 0; i < g.size(); ++i) {
                std::vector<Cell> row{g[i]};
                for (auto const& phi : result.fine.eigenfunctions) {
                    row.emplace_back(phi[i]);
                }
                ef.rows.push_back(std::move(row));
            }
            write_file(cfg.eigenfunctions, to_csv(ef));
        }
        if (cfg.plot) {
            std::vector<double> x, y;
            for (auto const& lv : result.levels) {
                x.push_back(static_cast<double>(lv.index));
                y.push_back(lv.energy);
            }
            write_file(plot_path(cfg.out, "spectrum.svg"), svg_line_plot(x, y, "n", "E_n"));
        }
        return int{exit_ok};
    });
}

/// One sweep point per swept value; evaluated on up to `jobs` threads and
/// assembled in sweep order.
inline int
cmd_sweep(SweepConfig const& cfg, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        validate(cfg);
        auto const values = cfg.values();
        std::vector<RunConfig> points;
        for (double v : values) {
            auto point = with_parameter(cfg.run, cfg.param, v);
            validate(point);
            points.push_back(point);
        }

        struct Outcome
        {
            std::vector<Level> levels;
            std::string error;
        };
        std::vector<Outcome> outcomes(points.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < points.size(); i = next++) {
                try {
                    outcomes[i].levels = solve_levels(points[i]).levels;
                } catch (std::exception const& e) {
                    outcomes[i].error = e.what();
                }
            }
        };
        auto const jobs = std::min<std::size_t>(static_cast<std::size_t>(cfg.run.jobs), points.size());
        {
            std::vector<std::jthread> pool;
            for (std::size_t j = 1; j < jobs; ++j) {
                pool.emplace_back(worker);
            }
            worker();
        }

        double const nan = std::numeric_limits<double>::quiet_NaN();
        Table t{{cfg.param, "index", "lambda", "E", "E_shooting", "abs_diff", "error"}, {}};
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!outcomes[i].error.empty()) {
                err << "warning: " << cfg.param << " = " << format_real(values[i]) << ": " << outcomes[i].error << "\n";
                for (long j = 0; j < cfg.run.k; ++j) {
                    t.rows.push_back({values[i], j, nan, nan, nan, nan, outcomes[i].error});
                }
                continue;
            }
            for (auto const& lv : outcomes[i].levels) {
                t.rows.push_back(
                  {values[i], lv.index, lv.lambda, lv.energy, lv.energy_shooting, lv.abs_diff, std::string()});
            }
        }
        emit(render(t, cfg.run.format, "sweep", metadata_echo(cfg)), cfg.run.out, out);

        if (cfg.run.plot) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < points.size(); ++i) {
                x.push_back(values[i]);
                y.push_back(outcomes[i].error.empty() ? outcomes[i].levels.front().energy : nan);
            }
            write_file(plot_path(cfg.run.out, "sweep.svg"), svg_line_plot(x, y, cfg.param, "E_0"));
        }
        return int{exit_ok};
    });
}

inline nlohmann::ordered_json
report_json(verify::Report const& rep)
{
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (auto const& c : rep.checks) {
        nlohmann::ordered_json j;
        j["suite"] = rep.suite;
        j["check"] = c.name;
        j["measured"] = c.measured;
        j["lower"] = c.lower ? nlohmann::ordered_json(*c.lower) : nlohmann::ordered_json(nullptr);
        j["upper"] = c.upper;
        j["pass"] = c.pass();
        checks.push_back(std::move(j));
    }
    return checks;
}

/// suite is one of the verify::suite_names() or "all".
inline int
cmd_verify(std::string const& suite, std::string const& out_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        std::vector<std::string> names;
        if (suite == "all") {
            names = verify::suite_names();
        } else if (std::find(verify::suite_names().begin(), verify::suite_names().end(), suite) !=
                   verify::suite_names().end()) {
            names = {suite};
        } else {
            throw ConfigError("unknown suite '" + suite + "' (expected vonroos, susy, hermitize, reduction or all)");
        }

        bool all_pass = true;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        nlohmann::ordered_json notes = nlohmann::ordered_json::array();
        for (auto const& name : names) {
            auto const rep = verify::run_suite(name);
            all_pass = all_pass && rep.pass();
            for (auto& row : report_json(rep)) {
                rows.push_back(row);
            }
            for (auto const& n : rep.notes) {
                notes.push_back(name + ": " + n);
            }
            for (auto const& c : rep.checks) {
                if (!c.pass()) {
                    err << "FAIL " << name << ": " << c.name << " measured " << format_real(c.measured) << "\n";
                }
            }
        }
        nlohmann::ordered_json doc;
        doc["meta"]["command"] = "verify";
        doc["meta"]["version"] = version();
        doc["meta"]["config"] = {{"suite", suite}};
        doc["meta"]["pass"] = all_pass;
        doc["meta"]["notes"] = notes;
        doc["rows"] = rows;
        emit(doc.dump(2) + "\n", out_path, out);
        return all_pass ? int{exit_ok} : int{exit_verification_failed};
    });
}

enum class ProfileKind
{
    mass,
    veff,
};

inline ProfileKind
parse_profile_kind(std::string const& s)
{
    if (s == "mass") {
        return ProfileKind::mass;
    }
    if (s == "veff") {
        return ProfileKind::veff;
    }
    throw ConfigError("unknown profile '" + s + "' (expected mass or veff)");
}

/// Two-column (p, value) table of M(p) or V_eff(p) - Lambda at the given energy.
inline int
cmd_profile(RunConfig const& cfg, ProfileKind which, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        // Profiles sample functions only, so the eigen-solver settings are not checked.
        auto checked = cfg;
        checked.k = 1;
        checked.extrapolate = false;
        validate(checked);
        if (which == ProfileKind::veff && !cfg.energy) {
            throw ConfigError("veff profile requires an energy (--energy or energy = ...)");
        }
        auto const grid = symmetric_grid(cfg.effective_pmax(), static_cast<std::size_t>(cfg.n));
        SampledFunction values(grid, 0.0);
        if (cfg.model == Model::gup_oscillator) {
            auto const params = gup_params(cfg);
            values = which == ProfileKind::mass ? mass_profile_gup(params, grid)
                                                : effective_potential_gup(params, *cfg.energy, grid);
        } else {
            auto const params = swanson_params(cfg);
            values = which == ProfileKind::mass ? mass_profile_swanson(params, grid)
                                                : effective_potential_swanson(params, *cfg.energy, grid);
        }
        std::string const label = which == ProfileKind::mass ? "M" : "V_eff";
        Table t{{"p", label}, {}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.rows.push_back({grid[i], values[i]});
        }
        auto kv = metadata_echo(cfg);
        kv.emplace_back("which", which == ProfileKind::mass ? "mass" : "veff");
        emit(render(t, cfg.format, "profile", kv), cfg.out, out);
        if (cfg.plot) {
            auto const p = grid.points();
            std::vector<double> x(p.begin(), p.end());
            std::vector<double> y(values.values().begin(), values.values().end());
            write_file(plot_path(cfg.out, "profile.svg"), svg_line_plot(x, y, "p", label));
        }
        return int{exit_ok};
    });
}

} // namespace gupmdm::cli
