#pragma once

// Deformed oscillator and deformed Swanson eigenproblems: raw ODE
// coefficients, self-adjoint Sturm-Liouville forms, and the
// momentum-dependent mass / effective potential profiles.

#include <cmath>
#include <stdexcept>
#include <string>

#include "gupmdm/core.hpp"

namespace gupmdm {

/// Harmonic oscillator H = (P^2 + omega^2 X^2)/2 under X = i(1 + tau p^2) d/dp, P = p.
class GupOscillatorParams
{
  public:
    GupOscillatorParams(double omega, double tau)
      : omega_(omega)
      , tau_(tau)
    {
        if (!std::isfinite(omega) || !(omega > 0.0)) {
            throw std::invalid_argument("omega > 0 required, got " + detail::to_string(omega));
        }
        if (!std::isfinite(tau) || tau < 0.0) {
            throw std::invalid_argument("tau >= 0 required, got " + detail::to_string(tau));
        }
    }

    double omega() const { return omega_; }
    double tau() const { return tau_; }
    double mu2() const { return 1.0 / (omega_ * omega_); }
    /// lambda = 2E / omega^2
    double lambda_from_energy(double energy) const { return 2.0 * energy / (omega_ * omega_); }

  private:
    double omega_;
    double tau_;
};

/// Swanson Hamiltonian omega(n^+ n + 1/2) + alpha n^2 + beta n^+^2 with the same deformation.
class SwansonParams
{
  public:
    SwansonParams(double omega, double alpha, double beta, double tau)
      : omega_(omega)
      , alpha_(alpha)
      , beta_(beta)
      , tau_(tau)
    {
        if (!std::isfinite(omega) || !std::isfinite(alpha) || !std::isfinite(beta)) {
            throw std::invalid_argument("swanson parameters must be finite");
        }
        if (!std::isfinite(tau) || tau < 0.0) {
            throw std::invalid_argument("tau >= 0 required, got " + detail::to_string(tau));
        }
        if (!(omega * omega - 4.0 * alpha * beta > 0.0)) {
            throw std::invalid_argument("invariant omega^2 - 4 alpha beta > 0 violated");
        }
        if (!(omega * (omega + alpha + beta) > 0.0)) {
            throw std::invalid_argument("invariant omega (omega + alpha + beta) > 0 violated");
        }
    }

    double omega() const { return omega_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double tau() const { return tau_; }

    /// sqrt(omega^2 - 4 alpha beta)
    double omega_bar() const { return std::sqrt(omega_ * omega_ - 4.0 * alpha_ * beta_); }
    /// Leading coefficient omega (omega + alpha + beta) of the deformed ODE.
    double leading() const { return omega_ * (omega_ + alpha_ + beta_); }
    /// (alpha - beta) / (omega (omega + alpha + beta))
    double delta() const { return (alpha_ - beta_) / leading(); }
    /// Bracketed p^2 coefficient (omega - alpha - beta)/omega - (omega + alpha - beta) tau.
    double potential_constant() const
    {
        return (omega_ - alpha_ - beta_) / omega_ - (omega_ + alpha_ - beta_) * tau_;
    }
    /// Mass exponent 1 + (alpha - beta)/(omega tau (omega + alpha + beta)); tau > 0 only.
    double mass_exponent() const
    {
        if (!(tau_ > 0.0)) {
            throw std::invalid_argument("mass exponent is singular at tau = 0; use the exp(delta p^2) "
                                        "limiting weight (swanson_weight) instead");
        }
        return 1.0 + delta() / tau_;
    }

  private:
    double omega_;
    double alpha_;
    double beta_;
    double tau_;
};

/// a2 u'' + a1 u' = (a0P - Lambda a0E) u, Lambda the raw spectral parameter.
struct RawOdeCoefficients
{
    SampledFunction a2;
    SampledFunction a1;
    SampledFunction a0E;
    SampledFunction a0P;
};

/// Affine map from a generalized eigenvalue to the physical energy.
struct EnergyMap
{
    double scale = 1.0;
    double shift = 0.0;

    double energy(double generalized) const { return scale * generalized + shift; }
    double generalized(double energy) const { return (energy - shift) / scale; }
};

inline EnergyMap
energy_map(GupOscillatorParams const& params)
{
    return {0.5 * params.omega() * params.omega(), 0.0};
}

inline EnergyMap
energy_map(SwansonParams const& params)
{
    // Lambda = 2E + alpha - beta
    return {0.5, -0.5 * (params.alpha() - params.beta())};
}

/// Truncation half-width for oscillator-like problems: twelve ground-state widths.
inline double
default_p_max(double omega)
{
    return 12.0 * std::sqrt(omega);
}

inline RawOdeCoefficients
gup_oscillator_raw(GupOscillatorParams const& params, Grid const& grid)
{
    double const tau = params.tau();
    double const mu2 = params.mu2();
    auto g = [tau](double p) { return 1.0 + tau * p * p; };
    return {
      SampledFunction(grid, 1.0),
      SampledFunction::sample(grid, [&](double p) { return 2.0 * tau * p / g(p); }),
      SampledFunction::sample(grid, [&](double p) { return 1.0 / (g(p) * g(p)); }),
      SampledFunction::sample(grid, [&](double p) { return mu2 * p * p / (g(p) * g(p)); }),
    };
}

/// Multiplying the raw equation by 1 + tau p^2 gives
/// -((1 + tau p^2) u')' + mu^2 p^2/(1 + tau p^2) u = lambda u/(1 + tau p^2).
inline SturmLiouvilleProblem
gup_oscillator_sl(GupOscillatorParams const& params, Grid const& grid)
{
    double const tau = params.tau();
    double const mu2 = params.mu2();
    return SturmLiouvilleProblem(
      SampledFunction::sample(grid, [&](double p) { return 1.0 + tau * p * p; }),
      SampledFunction::sample(grid, [&](double p) { return mu2 * p * p / (1.0 + tau * p * p); }),
      SampledFunction::sample(grid, [&](double p) { return 1.0 / (1.0 + tau * p * p); }));
}

/// Coefficients of the deformed Swanson equation exactly as printed:
///   K u'' + 2p/(1+tau p^2) [K tau + (alpha-beta)] u' = [C p^2 - (2E + alpha - beta)] u/(1+tau p^2)^2
/// with K = omega(omega+alpha+beta).
inline RawOdeCoefficients
swanson_raw(SwansonParams const& params, Grid const& grid)
{
    double const tau = params.tau();
    double const K = params.leading();
    double const amb = params.alpha() - params.beta();
    double const C = params.potential_constant();
    auto g = [tau](double p) { return 1.0 + tau * p * p; };
    return {
      SampledFunction(grid, K),
      SampledFunction::sample(grid, [&](double p) { return 2.0 * p * (K * tau + amb) / g(p); }),
      SampledFunction::sample(grid, [&](double p) { return 1.0 / (g(p) * g(p)); }),
      SampledFunction::sample(grid, [&](double p) { return C * p * p / (g(p) * g(p)); }),
    };
}

/// log of the integrating factor W(p) of the Swanson equation (divided by K):
/// (1 + delta/tau) log(1 + tau p^2) for tau > 0, delta p^2 at tau = 0.
inline double
swanson_log_weight(SwansonParams const& params, double p)
{
    double const tau = params.tau();
    if (tau > 0.0) {
        return (1.0 + params.delta() / tau) * std::log1p(tau * p * p);
    }
    return params.delta() * p * p;
}

inline SampledFunction
swanson_weight(SwansonParams const& params, Grid const& grid, double cap = 1e12)
{
    double const log_cap = std::log(cap);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double const lw = swanson_log_weight(params, grid[i]);
        if (!(lw <= log_cap)) {
            throw std::invalid_argument("integrating factor exceeds cap " + detail::to_string(cap) +
                                        " at p = " + detail::to_string(grid[i]));
        }
        v[i] = std::exp(lw);
    }
    return SampledFunction(grid, std::move(v));
}

/// -(W u')' + C p^2 W/((1+tau p^2)^2 K) u = Lambda W/((1+tau p^2)^2 K) u,
/// Lambda = 2E + alpha - beta.
inline SturmLiouvilleProblem
swanson_sl(SwansonParams const& params, Grid const& grid, double cap = 1e12)
{
    double const tau = params.tau();
    double const K = params.leading();
    double const C = params.potential_constant();
    SampledFunction W = swanson_weight(params, grid, cap);
    SampledFunction w = SampledFunction::sample(grid, [&](double p) {
        double const g = 1.0 + tau * p * p;
        return 1.0 / (g * g * K);
    }) * W;
    SampledFunction q = SampledFunction::sample(grid, [&](double p) { return C * p * p; }) * w;
    return SturmLiouvilleProblem(std::move(W), std::move(q), std::move(w));
}

/// M(p) = 1/(1 + tau p^2)
inline SampledFunction
mass_profile_gup(GupOscillatorParams const& params, Grid const& grid)
{
    double const tau = params.tau();
    return SampledFunction::sample(grid, [tau](double p) { return 1.0 / (1.0 + tau * p * p); });
}

/// M(p) = (1 + tau p^2)^-(1 + (alpha-beta)/(omega tau (omega+alpha+beta))); tau > 0 only.
inline SampledFunction
mass_profile_swanson(SwansonParams const& params, Grid const& grid)
{
    double const e = params.mass_exponent();
    double const tau = params.tau();
    return SampledFunction::sample(grid, [&](double p) { return std::exp(-e * std::log1p(tau * p * p)); });
}

/// V_eff - Lambda = (mu^2 p^2 - lambda)/(1 + tau p^2), lambda = 2E/omega^2.
inline SampledFunction
effective_potential_gup(GupOscillatorParams const& params, double energy, Grid const& grid)
{
    double const tau = params.tau();
    double const mu2 = params.mu2();
    double const lambda = params.lambda_from_energy(energy);
    return SampledFunction::sample(grid,
                                   [&](double p) { return (mu2 * p * p - lambda) / (1.0 + tau * p * p); });
}

/// V_eff - Lambda = [C p^2 - (2E + alpha - beta)] (1 + tau p^2)^(e - 2) / K, e the mass exponent.
inline SampledFunction
effective_potential_swanson(SwansonParams const& params, double energy, Grid const& grid)
{
    double const e = params.mass_exponent();
    double const tau = params.tau();
    double const C = params.potential_constant();
    double const K = params.leading();
    double const shift = 2.0 * energy + params.alpha() - params.beta();
    return SampledFunction::sample(grid, [&](double p) {
        return (C * p * p - shift) * std::exp((e - 2.0) * std::log1p(tau * p * p)) / K;
    });
}

/// a2 u'' + a1 u' - (a0P - Lambda a0E) u at every grid point, with the
/// derivatives of u supplied by the caller.
inline SampledFunction
raw_residual(RawOdeCoefficients const& coeffs,
             SampledFunction const& u,
             SampledFunction const& du,
             SampledFunction const& d2u,
             double lambda)
{
    return coeffs.a2 * d2u + coeffs.a1 * du - (coeffs.a0P - lambda * coeffs.a0E) * u;
}

/// (c u')' - (q - lambda w) u = c u'' + c' u' - (q - lambda w) u at every
/// grid point; dc is the derivative of the diffusion coefficient.
inline SampledFunction
sl_residual(SturmLiouvilleProblem const& slp,
            SampledFunction const& dc,
            SampledFunction const& u,
            SampledFunction const& du,
            SampledFunction const& d2u,
            double lambda)
{
    return slp.c() * d2u + dc * du - (slp.q() - lambda * slp.w()) * u;
}

} // namespace gupmdm
