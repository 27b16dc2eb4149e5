#pragma once

// Numerical verification suites for the reduction identities, the von Roos
// ordering identity, SUSY isospectrality and the similarity transform.
// Each suite returns measured defects next to the tolerance they are held to.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gupmdm/algebra.hpp"
#include "gupmdm/core.hpp"
#include "gupmdm/models.hpp"
#include "gupmdm/solver.hpp"
#include "gupmdm/susy.hpp"
#include "gupmdm/vonroos.hpp"

namespace gupmdm::verify {

struct Check
{
    std::string name;
    double measured = 0.0;
    std::optional<double> lower;
    double upper = 0.0;

    bool pass() const
    {
        return std::isfinite(measured) && measured <= upper && (!lower || measured >= *lower);
    }
};

struct Report
{
    std::string suite;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    bool pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](Check const& c) { return c.pass(); });
    }
};

/// exp(-(p - center)^2 / (2 width^2)) with exact first and second derivatives.
struct GaussianProbe
{
    double center;
    double width;

    double value(double p) const
    {
        double const x = (p - center) / width;
        return std::exp(-0.5 * x * x);
    }
    double first(double p) const { return -(p - center) / (width * width) * value(p); }
    double second(double p) const
    {
        double const x = (p - center) / width;
        return (x * x - 1.0) / (width * width) * value(p);
    }
};

inline std::vector<GaussianProbe> const&
standard_probes()
{
    static std::vector<GaussianProbe> const probes{{0.0, 1.0}, {0.5, 0.7}, {-1.0, 1.5}, {1.3, 2.0}, {-0.4, 0.5}};
    return probes;
}

/// max |a_i - b_i| over the inner 80% of the grid.
inline double
inner_max_deviation(SampledFunction const& a, SampledFunction const& b)
{
    SampledFunction::require_same_grid(a, b);
    auto const r = inner_range(a.grid());
    double m = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

/// ||u - v||_2 / ||scale||_2 over the inner 80% of the grid.
inline double
inner_relative_l2(SampledFunction const& u, SampledFunction const& v, SampledFunction const& scale)
{
    auto const r = inner_range(u.grid());
    double num = 0.0, den = 0.0;
    for (std::size_t i = r.first; i <= r.last; ++i) {
        num += (u[i] - v[i]) * (u[i] - v[i]);
        den += scale[i] * scale[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline std::string
short_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

/// M = 1/(1 + tau p^2) with exact derivatives.
inline MassFunction
gup_mass_function(double tau, Grid const& grid)
{
    auto const m = SampledFunction::sample(grid, [tau](double p) { return 1.0 / (1.0 + tau * p * p); });
    auto const dm = SampledFunction::sample(grid, [tau](double p) {
        double const g = 1.0 + tau * p * p;
        return -2.0 * tau * p / (g * g);
    });
    auto const d2m = SampledFunction::sample(grid, [tau](double p) {
        double const g = 1.0 + tau * p * p;
        return (6.0 * tau * tau * p * p - 2.0 * tau) / (g * g * g);
    });
    return MassFunction(m, dm, d2m);
}

// ---------------------------------------------------------------- vonroos

/// Max deviation between the ordered operator (plus V) and the reduced form
/// for one ordering on one grid.
inline double
vonroos_identity_defect(double tau, AmbiguityParams const& amb, Grid const& grid)
{
    auto const mass = gup_mass_function(tau, grid);
    auto const phi = SampledFunction::sample(grid, [](double p) { return (1.0 + 0.3 * p) * std::exp(-0.5 * p * p); });
    auto const v = SampledFunction::sample(grid, [tau](double p) { return p * p / (1.0 + tau * p * p); });
    auto const ordered = vonroos_apply(mass, amb, phi) + v * phi;
    auto const reduced = reduced_form_apply(mass, amb, v, phi);
    return inner_max_deviation(ordered, reduced);
}

inline Report
vonroos_suite()
{
    Report rep{"vonroos", {}, {}};
    double const tau = 0.1;
    std::vector<Grid> grids{symmetric_grid(8.0, 401), symmetric_grid(8.0, 801), symmetric_grid(8.0, 1601)};
    struct Pair
    {
        double a, b;
        char const* label;
    };
    for (auto const& [a, b, label] : {Pair{0.0, -1.0, "(0,-1)"}, Pair{-0.5, 0.0, "(-1/2,0)"}, Pair{0.0, 0.0, "(0,0)"},
                                      Pair{-1.0, 0.0, "(-1,0)"}}) {
        AmbiguityParams const amb(a, b);
        std::vector<double> defects;
        for (auto const& g : grids) {
            defects.push_back(vonroos_identity_defect(tau, amb, g));
        }
        for (std::size_t i = 0; i + 1 < defects.size(); ++i) {
            rep.checks.push_back({std::string("identity ratio ") + label + " h" + std::to_string(i) + "/h" +
                                    std::to_string(i + 1),
                                  defects[i] / defects[i + 1],
                                  3.6,
                                  4.4});
        }
        rep.checks.push_back({std::string("identity defect ") + label + " finest", defects.back(), std::nullopt, 1e-3});
    }

    // Effective potential is invariant under a <-> c.
    auto const g = grids.back();
    auto const mass = gup_mass_function(tau, g);
    SampledFunction const v(g, 0.0);
    double worst = 0.0;
    for (auto const& [a, b] : {std::pair{0.3, -0.2}, std::pair{-0.5, 0.0}, std::pair{1.2, 0.7}, std::pair{-2.0, 0.5}}) {
        AmbiguityParams const amb(a, b);
        auto const diff = effective_potential_vonroos(mass, v, amb) - effective_potential_vonroos(mass, v, amb.swapped());
        worst = std::max(worst, diff.max_abs());
    }
    rep.checks.push_back({"effective potential a<->c symmetry", worst, std::nullopt, 1e-12});
    rep.notes.push_back("M = 1/(1 + 0.1 p^2); grids h = 0.04, 0.02, 0.01 on [-8, 8]; inner 80% max norm");
    return rep;
}

// ---------------------------------------------------------------- susy

struct SusyResult
{
    std::vector<double> levels;         ///< Lambda_1 .. Lambda_count of H
    std::vector<double> partner_levels; ///< Lambda_{1,0} .. of H1
    double mapped_residual = 0.0;       ///< worst relative residual of A phi_{n+1} under H1
};

/// Spread of theta^2 - (xi theta)' - V over the inner 80% of the grid, with
/// theta taken from the numerical ground state of H = -D xi^2 D + V. The two
/// end points of the window are skipped: their central differences reach
/// into the extrapolated part of theta.
inline double
veff_reconstruction_spread(double tau, Grid const& grid)
{
    auto const xi = xi_gup(tau, grid);
    auto const v = SampledFunction::sample(grid, [tau](double p) { return p * p / (1.0 + tau * p * p); });
    auto const ground = eigen_solve(kinetic_problem(xi, v), 1);
    auto const theta = superpotential_from_ground_state(xi, ground.eigenfunctions[0]);
    auto const diff = veff_from_factorization(FactorizationData(xi, theta, 0.0)) - v;
    auto const r = inner_range(grid);
    double lo = diff[r.first + 1], hi = lo;
    for (std::size_t i = r.first + 1; i < r.last; ++i) {
        lo = std::min(lo, diff[i]);
        hi = std::max(hi, diff[i]);
    }
    return hi - lo;
}

/// Builds H = -D xi^2 D + p^2/(1 + tau p^2), factorizes it on its ground
/// state and solves the partner H1 on one grid.
inline SusyResult
susy_partner_run(double tau, Grid const& grid, std::size_t count)
{
    auto const xi = xi_gup(tau, grid);
    auto const v = SampledFunction::sample(grid, [tau](double p) { return p * p / (1.0 + tau * p * p); });
    auto const h = kinetic_problem(xi, v);
    auto const spec = eigen_solve(h, count + 1);
    auto const theta = superpotential_from_ground_state(xi, spec.eigenfunctions[0]);
    FactorizationData const fd(xi, theta, spec.eigenvalues[0]);
    auto const h1 = kinetic_problem(xi, partner_potential(fd, v));
    auto const spec1 = eigen_solve(h1, count);

    SusyResult out;
    for (std::size_t n = 0; n < count; ++n) {
        out.levels.push_back(spec.eigenvalues[n + 1]);
        out.partner_levels.push_back(spec1.eigenvalues[n]);
        auto const mapped = apply_intertwiner(fd, spec.eigenfunctions[n + 1]);
        auto const image = apply_operator(h1, mapped);
        out.mapped_residual = std::max(out.mapped_residual,
                                       inner_relative_l2(image, spec.eigenvalues[n + 1] * mapped, mapped));
    }
    return out;
}

inline Report
susy_suite()
{
    Report rep{"susy", {}, {}};
    std::size_t const count = 5;
    for (double tau : {0.0, 0.05}) {
        auto const fine = symmetric_grid(12.0, 2401);
        auto const a = susy_partner_run(tau, fine.coarsened(), count);
        auto const b = susy_partner_run(tau, fine, count);
        double worst = 0.0;
        for (std::size_t n = 0; n < count; ++n) {
            double const lam = richardson(a.levels[n], b.levels[n]);
            double const lam1 = richardson(a.partner_levels[n], b.partner_levels[n]);
            worst = std::max(worst, std::abs(lam1 - lam));
        }
        std::string const tag = " tau=" + short_real(tau);
        rep.checks.push_back({"isospectrality |L1_n - L_{n+1}|, n<=4" + tag, worst, std::nullopt, 1e-4});
        rep.checks.push_back({"mapped eigenfunction residual" + tag, b.mapped_residual, std::nullopt, 1e-3});
        rep.checks.push_back(
          {"V_eff reconstruction spread" + tag, veff_reconstruction_spread(tau, symmetric_grid(5.0, 4001)), std::nullopt, 5e-4});
    }
    rep.notes.push_back("H = -D(1 + tau p^2)D + p^2/(1 + tau p^2), p in [-12, 12], h = 0.02 and 0.01, Richardson");
    rep.notes.push_back("V_eff reconstruction on p in [-5, 5], h = 0.0025");
    return rep;
}

// ---------------------------------------------------------------- hermitize

inline LadderRep
linear_ladder(Grid const& grid, double r0 = 1.0, double s1 = 1.0)
{
    return LadderRep(SampledFunction(grid, r0), SampledFunction::sample(grid, [s1](double p) { return s1 * p; }));
}

inline Report
hermitize_suite()
{
    Report rep{"hermitize", {}, {}};
    SwansonParams const params(2.0, 0.3, 0.1, 0.0);
    auto const grid = symmetric_grid(8.0, 2401);
    auto const coeffs = swanson_coefficients(linear_ladder(grid), params);
    auto const rho = similarity_weight(coeffs);
    auto const spec = eigen_solve(hermitized_problem(coeffs), 5);
    double worst = 0.0;
    for (std::size_t n = 0; n < 5; ++n) {
        worst = std::max(worst, untransformed_residual(coeffs, rho, spec.eigenfunctions[n], spec.eigenvalues[n]));
    }
    rep.checks.push_back({"rho^-1 mapped residual, n<=4", worst, std::nullopt, 1e-4});

    auto const levels = extrapolated_eigenvalues(
      [&](Grid const& g) { return hermitized_problem(swanson_coefficients(linear_ladder(g), params)); }, grid, 5);
    double spec_err = 0.0;
    for (std::size_t n = 0; n < 5; ++n) {
        double const exact = (2.0 * static_cast<double>(n) + 1.0) * params.omega_bar() - 1.0;
        spec_err = std::max(spec_err, std::abs(levels[n] - exact));
    }
    rep.checks.push_back({"hermitized spectrum vs (2n+1) omega_bar - 1", spec_err, std::nullopt, 1e-5});

    SwansonParams const hermitian(2.0, 0.2, 0.2, 0.0);
    auto const rho_h = similarity_weight(swanson_coefficients(linear_ladder(grid), hermitian));
    rep.checks.push_back({"alpha = beta gives rho == 1", (rho_h + (-1.0)).max_abs(), std::nullopt, 0.0});

    auto const probe = SampledFunction::sample(grid, [](double p) { return std::exp(-0.3 * p * p) * (1.0 + p); });
    double const control = untransformed_residual(coeffs, rho, probe, 1.0);
    rep.checks.push_back({"non-eigenpair residual (negative control)", control, 1e-2, std::numeric_limits<double>::max()});

    rep.notes.push_back("ladder r = 1, s = p; omega = 2, alpha = 0.3, beta = 0.1; p in [-8, 8], h = 0.00667");
    rep.notes.push_back("leading kinetic coefficient (omega - alpha - beta) r^2 = " +
                        short_real(std::sqrt(params.omega() - params.alpha() - params.beta()) *
                                   std::sqrt(params.omega() - params.alpha() - params.beta())) +
                        " vs deformed-equation coefficient omega (omega + alpha + beta) = " +
                        short_real(params.leading()) + "; no (r, s) is matched to the deformed equation");
    return rep;
}

// ---------------------------------------------------------------- reduction

inline Report
reduction_suite()
{
    Report rep{"reduction", {}, {}};
    auto const grid = symmetric_grid(6.0, 601);
    double worst = 0.0;
    for (double tau : {0.05, 0.1, 1.0}) {
        for (double omega : {0.5, 1.0, 2.0}) {
            GupOscillatorParams const params(omega, tau);
            auto const raw = gup_oscillator_raw(params, grid);
            auto const slp = gup_oscillator_sl(params, grid);
            auto const dc = derivative(slp.c());
            auto const factor = SampledFunction::sample(grid, [tau](double p) { return 1.0 + tau * p * p; });
            for (auto const& probe : standard_probes()) {
                auto const u = SampledFunction::sample(grid, [&](double p) { return probe.value(p); });
                auto const du = SampledFunction::sample(grid, [&](double p) { return probe.first(p); });
                auto const d2u = SampledFunction::sample(grid, [&](double p) { return probe.second(p); });
                double const lambda = 1.7;
                auto const lhs = factor * raw_residual(raw, u, du, d2u, lambda);
                auto const rhs = sl_residual(slp, dc, u, du, d2u, lambda);
                worst = std::max(worst, (lhs - rhs).max_abs());
            }
        }
    }
    rep.checks.push_back({"(1 + tau p^2) raw residual - SL residual", worst, std::nullopt, 1e-12});

    double mass_defect = 0.0;
    for (double tau : {0.0, 0.1, 1.0}) {
        GupOscillatorParams const params(1.0, tau);
        auto const prod = mass_profile_gup(params, grid) * gup_oscillator_sl(params, grid).c();
        mass_defect = std::max(mass_defect, (prod + (-1.0)).max_abs());
    }
    rep.checks.push_back({"M(p) * c(p) == 1", mass_defect, std::nullopt, 1e-15});

    // Swanson with alpha = beta = 0 against the oscillator form.
    double collapse = 0.0;
    for (double tau : {0.0, 0.05}) {
        double const omega = 1.5;
        GupOscillatorParams const gp(omega, tau);
        SwansonParams const sp(omega, 0.0, 0.0, tau);
        auto const a = gup_oscillator_sl(gp, grid);
        auto const b = swanson_sl(sp, grid);
        collapse = std::max(collapse, (a.c() - b.c()).max_abs());
        collapse = std::max(collapse, (a.w() - (omega * omega) * b.w()).max_abs());
        collapse = std::max(collapse, ((1.0 - omega * tau) * a.q() - b.q()).max_abs());
    }
    rep.checks.push_back({"swanson(alpha = beta = 0) collapse to oscillator form", collapse, std::nullopt, 1e-12});

    // tau -> 0+ branch continuity of the Swanson weight; the physical shift is
    // about 120 tau for these levels.
    auto const fine = symmetric_grid(default_p_max(2.0), 1201);
    auto const e0 = eigen_solve(swanson_sl(SwansonParams(2.0, 0.3, 0.1, 0.0), fine), 6);
    auto const e1 = eigen_solve(swanson_sl(SwansonParams(2.0, 0.3, 0.1, 1e-8), fine), 6);
    double branch = 0.0;
    for (std::size_t n = 0; n < 6; ++n) {
        branch = std::max(branch, std::abs(e0.eigenvalues[n] - e1.eigenvalues[n]));
    }
    rep.checks.push_back({"swanson tau = 0 vs tau = 1e-8 branches", branch, std::nullopt, 1e-5});
    rep.notes.push_back("Swanson at alpha = beta = 0 carries q scaled by (1 - omega tau) relative to the oscillator");
    return rep;
}

inline std::vector<std::string> const&
suite_names()
{
    static std::vector<std::string> const names{"vonroos", "susy", "hermitize", "reduction"};
    return names;
}

inline Report
run_suite(std::string const& name)
{
    if (name == "vonroos") {
        return vonroos_suite();
    }
    if (name == "susy") {
        return susy_suite();
    }
    if (name == "hermitize") {
        return hermitize_suite();
    }
    if (name == "reduction") {
        return reduction_suite();
    }
    throw std::invalid_argument("unknown verification suite '" + name + "'");
}

} // namespace gupmdm::verify
