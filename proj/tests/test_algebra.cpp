#include <cmath>

#include <gtest/gtest.h>

#include "gupmdm/algebra.hpp"
#include "gupmdm/solver.hpp"
#include "gupmdm/verify.hpp"

using namespace gupmdm;

namespace {

/// (eta eta^+ - eta^+ eta) phi with eta = r D + s and eta^+ = -D r + s,
/// composed from finite differences.
SampledFunction
composed_commutator(LadderRep const& rep, SampledFunction const& phi)
{
    auto const& r = rep.r();
    auto const& s = rep.s();
    auto eta = [&](SampledFunction const& f) { return r * derivative(f) + s * f; };
    auto eta_dag = [&](SampledFunction const& f) { return -derivative(r * f) + s * f; };
    return eta(eta_dag(phi)) - eta_dag(eta(phi));
}

double
inner_max(SampledFunction const& f)
{
    auto const range = inner_range(f.grid());
    double m = 0.0;
    for (std::size_t i = range.first; i <= range.last; ++i) {
        m = std::max(m, std::abs(f[i]));
    }
    return m;
}

LadderRep
make_rep(Grid const& g, double (*r)(double), double (*s)(double))
{
    return LadderRep(SampledFunction::sample(g, r), SampledFunction::sample(g, s));
}

} // namespace

TEST(Ladder, RequiresPositiveR)
{
    Grid const g(-1.0, 1.0, 11);
    EXPECT_THROW(LadderRep(SampledFunction(g, 0.0), SampledFunction(g, 1.0)), std::invalid_argument);
}

TEST(Ladder, StandardAlgebraRestored)
{
    Grid const g(-5.0, 5.0, 101);
    auto const rep = make_rep(
      g, [](double) { return 1.0 / std::sqrt(2.0); }, [](double p) { return p / std::sqrt(2.0); });
    auto const comm = ladder_commutator(rep);
    EXPECT_NEAR(comm.min(), 1.0, 1e-13);
    EXPECT_NEAR(comm.max_abs(), 1.0, 1e-13);
    auto const unit = make_rep(g, [](double) { return 1.0; }, [](double p) { return p; });
    EXPECT_NEAR(ladder_commutator(unit).min(), 2.0, 1e-13);
}

TEST(Ladder, CommutatorMatchesCompositionAtSecondOrder)
{
    using Fn = double (*)(double);
    struct Pair
    {
        Fn r, s;
    };
    Pair const pairs[] = {
      {[](double p) { return 1.0 + 0.2 * p * p; }, [](double p) { return std::sin(p); }},
      {[](double p) { return std::exp(0.1 * p); }, [](double p) { return p * p * p / 10.0; }},
      {[](double p) { return std::sqrt(1.0 + 0.3 * p * p); }, [](double p) { return p / std::sqrt(1.0 + 0.3 * p * p); }},
    };
    for (auto const& pair : pairs) {
        std::vector<double> errs, hs;
        for (std::size_t n : {201u, 401u, 801u}) {
            Grid const g(-6.0, 6.0, n);
            auto const rep = make_rep(g, pair.r, pair.s);
            double worst = 0.0;
            for (auto const& probe : verify::standard_probes()) {
                auto const phi = SampledFunction::sample(g, [&](double p) { return probe.value(p); });
                worst = std::max(worst, inner_max(composed_commutator(rep, phi) - ladder_commutator(rep) * phi));
            }
            errs.push_back(worst);
            hs.push_back(g.h());
        }
        double const slope = std::log(errs.front() / errs.back()) / std::log(hs.front() / hs.back());
        EXPECT_NEAR(slope, 2.0, 0.1);
    }
}

TEST(SwansonCoefficients, HermitianCaseHasNoFirstOrderTerm)
{
    Grid const g(-4.0, 4.0, 81);
    auto const rep = make_rep(g, [](double p) { return 1.0 + 0.1 * p * p; }, [](double p) { return p; });
    auto const coeffs = swanson_coefficients(rep, SwansonParams(2.0, 0.25, 0.25, 0.0));
    EXPECT_EQ(coeffs.s_t.max_abs(), 0.0);
    auto const rho = similarity_weight(coeffs);
    EXPECT_EQ(rho.min(), 1.0);
    EXPECT_EQ(rho.max_abs(), 1.0);
    EXPECT_LE((hermitized_potential(coeffs) - coeffs.w_t).max_abs(), 1e-15);
}

TEST(SwansonCoefficients, StandardRepGivesOscillator)
{
    Grid const g(-4.0, 4.0, 81);
    auto const rep = make_rep(
      g, [](double) { return 1.0 / std::sqrt(2.0); }, [](double p) { return p / std::sqrt(2.0); });
    auto const coeffs = swanson_coefficients(rep, SwansonParams(1.0, 0.0, 0.0, 0.0));
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(coeffs.w_t[i], 0.5 * g[i] * g[i], 1e-12);
        EXPECT_NEAR(coeffs.r_t[i] * coeffs.r_t[i], 0.5, 1e-15);
    }
}

TEST(SwansonCoefficients, PointValues)
{
    Grid const g(-4.0, 4.0, 81);
    auto const rep = make_rep(g, [](double) { return 1.0; }, [](double p) { return p; });
    auto const coeffs = swanson_coefficients(rep, SwansonParams(2.0, 0.3, 0.1, 0.0));
    EXPECT_NEAR(coeffs.s_t[50], 0.4, 1e-14);
    EXPECT_NEAR(coeffs.w_t[50], 1.6, 1e-12);
    EXPECT_NEAR(coeffs.r_t[50], std::sqrt(1.6), 1e-15);
    EXPECT_THROW(swanson_coefficients(rep, SwansonParams(1.0, 0.5, 0.5, 0.0)), std::invalid_argument);
}

TEST(SimilarityWeight, ConstantRatioIsExponential)
{
    Grid const g(-3.0, 3.0, 61);
    SwansonCoefficients const coeffs{SampledFunction(g, 2.0), SampledFunction(g, 2.0), SampledFunction(g, 0.0)};
    auto const rho = similarity_weight(coeffs);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(rho[i], std::exp(-0.25 * g[i]), 1e-13);
    }
}

TEST(SimilarityWeight, SwansonGaussian)
{
    Grid const g(-8.0, 8.0, 1601);
    auto const rep = make_rep(g, [](double) { return 1.0; }, [](double p) { return p; });
    auto const rho = similarity_weight(swanson_coefficients(rep, SwansonParams(2.0, 0.3, 0.1, 0.0)));
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(rho[i], std::exp(-g[i] * g[i] / 16.0), 1e-8);
    }
}

TEST(SimilarityWeight, OverflowIsReported)
{
    Grid const g(-100.0, 100.0, 201);
    SwansonCoefficients const coeffs{SampledFunction(g, 1.0), SampledFunction::sample(g, [](double p) { return p; }),
                                     SampledFunction(g, 0.0)};
    EXPECT_THROW(similarity_weight(coeffs), std::overflow_error);
}

TEST(Hermitized, SpectrumMatchesModifiedFrequency)
{
    SwansonParams const params(2.0, 0.3, 0.1, 0.0);
    auto const levels = extrapolated_eigenvalues(
      [&](Grid const& g) { return hermitized_problem(swanson_coefficients(verify::linear_ladder(g), params)); },
      symmetric_grid(8.0, 2401), 5);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_NEAR(levels[n], (2.0 * static_cast<double>(n) + 1.0) * 1.969771560359221 - 1.0, 1e-5);
    }
}

TEST(Hermitized, MappedResidualAndNegativeControl)
{
    SwansonParams const params(2.0, 0.3, 0.1, 0.0);
    auto const g = symmetric_grid(8.0, 2401);
    auto const coeffs = swanson_coefficients(verify::linear_ladder(g), params);
    auto const rho = similarity_weight(coeffs);
    auto const spec = eigen_solve(hermitized_problem(coeffs), 5);
    for (std::size_t n = 0; n < 5; ++n) {
        EXPECT_LE(untransformed_residual(coeffs, rho, spec.eigenfunctions[n], spec.eigenvalues[n]), 1e-4);
    }
    EXPECT_GT(untransformed_residual(coeffs, rho, spec.eigenfunctions[1], spec.eigenvalues[0]), 1e-1);
}

TEST(Hermitized, IdentityTransformConvergesAtSecondOrder)
{
    std::vector<double> res;
    for (std::size_t n : {401u, 801u, 1601u}) {
        auto const g = symmetric_grid(8.0, n);
        auto const coeffs = swanson_coefficients(verify::linear_ladder(g), SwansonParams(2.0, 0.2, 0.2, 0.0));
        auto const rho = similarity_weight(coeffs);
        // r = 1, s = p, alpha = beta = 0.2: h = -1.6 D^2 + 2.4 p^2 - 1, ground state exp(-k p^2/2).
        double const k = std::sqrt(1.5);
        auto const phi = SampledFunction::sample(g, [k](double p) { return std::exp(-0.5 * k * p * p); });
        double const lambda = 1.6 * k - 1.0;
        res.push_back(untransformed_residual(coeffs, rho, phi, lambda));
    }
    EXPECT_NEAR(res[0] / res[1], 4.0, 0.4);
    EXPECT_NEAR(res[1] / res[2], 4.0, 0.4);
}
