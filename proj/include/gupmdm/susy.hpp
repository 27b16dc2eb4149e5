#pragma once

// First-order intertwiner A = xi D + theta between
//   H  = -D xi^2 D + V_eff       and       H1 = -D xi^2 D + V1_eff,
// with A H = H1 A.  Writing H = A^+ A + c0 and H1 = A A^+ + c0 gives
//   V_eff  = c0 + theta^2 - (xi theta)'
//   V1_eff = V_eff + 2 xi theta' - xi xi''.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gupmdm/core.hpp"

namespace gupmdm {

struct FactorizationData
{
    SampledFunction xi;
    SampledFunction theta;
    double c0 = 0.0;

    FactorizationData(SampledFunction xi_, SampledFunction theta_, double c0_)
      : xi(std::move(xi_))
      , theta(std::move(theta_))
      , c0(c0_)
    {
        SampledFunction::require_same_grid(xi, theta);
        if (!(xi.min() > 0.0)) {
            throw std::invalid_argument("xi must be positive on the grid");
        }
    }
};

/// xi(p) = sqrt(1 + tau p^2), the coefficient compatible with the GUP kinetic term.
inline SampledFunction
xi_gup(double tau, Grid const& grid)
{
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("tau >= 0 required");
    }
    return SampledFunction::sample(grid, [tau](double p) { return std::sqrt(1.0 + tau * p * p); });
}

/// theta = -xi phi0'/phi0, the unique choice with A phi0 = 0. Evaluated on
/// the inner 80% of the grid; linear extrapolation outside, where phi0 is
/// dominated by underflow.
inline SampledFunction
superpotential_from_ground_state(SampledFunction const& xi, SampledFunction const& phi0)
{
    SampledFunction::require_same_grid(xi, phi0);
    auto const range = inner_range(phi0.grid());
    for (std::size_t i = range.first; i <= range.last; ++i) {
        if (phi0[i] == 0.0) {
            throw std::invalid_argument("ground state vanishes at p = " + detail::to_string(phi0.grid()[i]));
        }
    }
    if (sign_changes(phi0, range.first, range.last) != 0) {
        throw std::invalid_argument("phi0 changes sign: not a ground state");
    }
    auto const d1 = derivative(phi0, 1);
    std::vector<double> theta(phi0.size());
    for (std::size_t i = range.first; i <= range.last; ++i) {
        theta[i] = -xi[i] * d1[i] / phi0[i];
    }
    double const h = phi0.grid().h();
    double const slope_lo = (theta[range.first + 1] - theta[range.first]) / h;
    double const slope_hi = (theta[range.last] - theta[range.last - 1]) / h;
    for (std::size_t i = 0; i < range.first; ++i) {
        theta[i] = theta[range.first] - slope_lo * h * static_cast<double>(range.first - i);
    }
    for (std::size_t i = range.last + 1; i < theta.size(); ++i) {
        theta[i] = theta[range.last] + slope_hi * h * static_cast<double>(i - range.last);
    }
    return SampledFunction(phi0.grid(), std::move(theta));
}

/// c0 + theta^2 - (xi theta)'
inline SampledFunction
veff_from_factorization(FactorizationData const& fd)
{
    return (fd.theta * fd.theta - derivative(fd.xi * fd.theta)) + fd.c0;
}

/// V_eff + 2 xi theta' - xi xi''
inline SampledFunction
partner_potential(FactorizationData const& fd, SampledFunction const& veff)
{
    return veff + 2.0 * (fd.xi * derivative(fd.theta)) - fd.xi * derivative(fd.xi, 2);
}

/// A phi = xi phi' + theta phi
inline SampledFunction
apply_intertwiner(FactorizationData const& fd, SampledFunction const& phi)
{
    return fd.xi * derivative(phi) + fd.theta * phi;
}

/// -D xi^2 D + V with unit weight.
inline SturmLiouvilleProblem
kinetic_problem(SampledFunction const& xi, SampledFunction const& v)
{
    return SturmLiouvilleProblem(xi * xi, v, SampledFunction(xi.grid(), 1.0));
}

struct ZeroMode
{
    SampledFunction kappa;
    double lambda;
};

/// kappa(p) = eta p / sqrt(1 + tau p^2) with Lambda = c0 - eta.
inline ZeroMode
kappa_zero_mode(double eta, double tau, Grid const& grid, double c0 = 0.0)
{
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("tau >= 0 required");
    }
    return {SampledFunction::sample(grid, [&](double p) { return eta * p / std::sqrt(1.0 + tau * p * p); }),
            c0 - eta};
}

} // namespace gupmdm
