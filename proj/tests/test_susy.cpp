#include <cmath>

#include <gtest/gtest.h>

#include "gupmdm/models.hpp"
#include "gupmdm/solver.hpp"
#include "gupmdm/susy.hpp"
#include "gupmdm/verify.hpp"

using namespace gupmdm;

namespace {

Grid const grid(-4.0, 4.0, 81);

std::size_t
origin()
{
    return 40;
}

} // namespace

TEST(Xi, Values)
{
    EXPECT_EQ(xi_gup(0.0, grid).min(), 1.0);
    EXPECT_EQ(xi_gup(0.0, grid).max_abs(), 1.0);
    EXPECT_NEAR(xi_gup(1.0, grid)[50], 1.4142135623730951, 1e-15);
    EXPECT_THROW(xi_gup(-1.0, grid), std::invalid_argument);
}

TEST(Xi, SquareIsOscillatorDiffusion)
{
    auto const xi = xi_gup(0.3, grid);
    auto const slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.3), grid);
    EXPECT_LE((xi * xi - slp.c()).max_abs(), 1e-14);
}

TEST(Factorization, RequiresPositiveXi)
{
    SampledFunction const zero(grid, 0.0);
    EXPECT_THROW(FactorizationData(zero, zero, 0.0), std::invalid_argument);
}

TEST(Factorization, TextbookOscillator)
{
    auto const p = SampledFunction::sample(grid, [](double x) { return x; });
    FactorizationData const fd(SampledFunction(grid, 1.0), p, 0.0);
    auto const veff = veff_from_factorization(fd);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(veff[i], grid[i] * grid[i] - 1.0, 1e-12);
    }
    auto const v1 = partner_potential(fd, veff);
    EXPECT_LE((v1 - (veff + 2.0)).max_abs(), 1e-12);
}

TEST(Factorization, ZeroSuperpotentialGivesConstant)
{
    FactorizationData const fd(xi_gup(0.2, grid), SampledFunction(grid, 0.0), 1.75);
    auto const veff = veff_from_factorization(fd);
    EXPECT_DOUBLE_EQ(veff.min(), 1.75);
    EXPECT_DOUBLE_EQ(veff.max_abs(), 1.75);
}

TEST(Superpotential, UndeformedGroundStateIsLinear)
{
    Grid const g(-12.0, 12.0, 1201);
    auto const slp = gup_oscillator_sl(GupOscillatorParams(1.0, 0.0), g);
    auto const ground = eigen_solve(slp, 1);
    auto const theta = superpotential_from_ground_state(xi_gup(0.0, g), ground.eigenfunctions[0]);
    EXPECT_NEAR(theta[600], 0.0, 1e-10);
    // Linear in p on the central region.
    for (std::size_t i = 450; i <= 750; i += 50) {
        EXPECT_NEAR(theta[i], g[i], 2e-3);
    }
}

TEST(Superpotential, AnnihilatesGroundState)
{
    Grid const g(-12.0, 12.0, 1201);
    auto const xi = xi_gup(0.05, g);
    auto const slp = kinetic_problem(xi, SampledFunction::sample(g, [](double p) { return p * p / (1 + 0.05 * p * p); }));
    auto const phi0 = eigen_solve(slp, 1).eigenfunctions[0];
    auto const theta = superpotential_from_ground_state(xi, phi0);
    EXPECT_NEAR(theta[600], 0.0, 1e-9);
    auto const d1 = derivative(phi0);
    auto const r = inner_range(g);
    for (std::size_t i = r.first; i <= r.last; ++i) {
        EXPECT_NEAR(xi[i] * d1[i] + theta[i] * phi0[i], 0.0, 1e-10);
    }
}

TEST(Superpotential, RejectsExcitedState)
{
    auto const phi1 = SampledFunction::sample(grid, [](double p) { return p * std::exp(-0.5 * p * p) + 1e-3; });
    EXPECT_THROW(superpotential_from_ground_state(SampledFunction(grid, 1.0), phi1), std::invalid_argument);
}

TEST(Partner, UndeformedHasNoCurvatureTerm)
{
    auto const theta = SampledFunction::sample(grid, [](double p) { return std::tanh(p); });
    FactorizationData const fd(xi_gup(0.0, grid), theta, 0.0);
    SampledFunction const v(grid, 0.0);
    auto const v1 = partner_potential(fd, v);
    auto const expected = 2.0 * derivative(theta);
    EXPECT_LE((v1 - expected).max_abs(), 1e-14);
}

TEST(Partner, IsospectralAtDeformation)
{
    auto const fine = symmetric_grid(12.0, 2401);
    auto const a = verify::susy_partner_run(0.05, fine.coarsened(), 5);
    auto const b = verify::susy_partner_run(0.05, fine, 5);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_NEAR(richardson(a.partner_levels[n], b.partner_levels[n]), richardson(a.levels[n], b.levels[n]), 1e-4);
    }
    EXPECT_LE(b.mapped_residual, 1e-3);
}

TEST(Partner, PrintedCurvatureTermBreaksIsospectrality)
{
    // With xi' xi'' in place of xi xi'' the partner spectrum drifts at tau > 0.
    Grid const g = symmetric_grid(12.0, 2401);
    double const tau = 0.05;
    auto const xi = xi_gup(tau, g);
    auto const v = SampledFunction::sample(g, [tau](double p) { return p * p / (1.0 + tau * p * p); });
    auto const spec = eigen_solve(kinetic_problem(xi, v), 3);
    auto const theta = superpotential_from_ground_state(xi, spec.eigenfunctions[0]);
    auto const printed = v + 2.0 * (xi * derivative(theta)) - derivative(xi) * derivative(xi, 2);
    auto const drift = eigen_solve(kinetic_problem(xi, printed), 1).eigenvalues[0] - spec.eigenvalues[1];
    EXPECT_GT(std::abs(drift), 1e-2);
}

TEST(Partner, VeffReconstructionSpread)
{
    EXPECT_LE(verify::veff_reconstruction_spread(0.0, symmetric_grid(5.0, 4001)), 5e-4);
    EXPECT_LE(verify::veff_reconstruction_spread(0.05, symmetric_grid(5.0, 4001)), 5e-4);
}

TEST(KappaZeroMode, Values)
{
    auto const zm = kappa_zero_mode(1.0, 1.0, grid, 0.5);
    EXPECT_NEAR(zm.kappa[50], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(zm.kappa[origin()], 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(zm.lambda, -0.5);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(zm.kappa[i], -zm.kappa[grid.size() - 1 - i], 1e-15);
        EXPECT_LT(std::abs(zm.kappa[i]), 1.0);
    }
    Grid const wide(-1e6, 1e6, 3);
    EXPECT_NEAR(kappa_zero_mode(2.0, 0.25, wide).kappa[2], 4.0, 1e-9);
    EXPECT_THROW(kappa_zero_mode(1.0, -0.1, grid), std::invalid_argument);
}
