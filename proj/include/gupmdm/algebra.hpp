#pragma once

// Generalized ladder operator eta = r(p) D + s(p), its commutator, the
// Swanson differential operator built from it,
//   H = -D rt^2 D + st D + wt,
// and the similarity transform rho H rho^-1 that removes the first-order term.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gupmdm/core.hpp"
#include "gupmdm/models.hpp"

namespace gupmdm {

class LadderRep
{
  public:
    LadderRep(SampledFunction r, SampledFunction s)
      : r_(std::move(r))
      , s_(std::move(s))
    {
        SampledFunction::require_same_grid(r_, s_);
        if (!(r_.min() > 0.0)) {
            throw std::invalid_argument("ladder coefficient r must be positive on the grid");
        }
    }

    SampledFunction const& r() const { return r_; }
    SampledFunction const& s() const { return s_; }
    Grid const& grid() const { return r_.grid(); }

  private:
    SampledFunction r_;
    SampledFunction s_;
};

/// [eta, eta^+] = 2 r s' - r r''  (eta^+ = -D r + s)
inline SampledFunction
ladder_commutator(LadderRep const& rep)
{
    auto const& r = rep.r();
    return 2.0 * (r * derivative(rep.s())) - r * derivative(r, 2);
}

struct SwansonCoefficients
{
    SampledFunction r_t;
    SampledFunction s_t;
    SampledFunction w_t;
};

inline SwansonCoefficients
swanson_coefficients(LadderRep const& rep, SwansonParams const& params)
{
    double const omega = params.omega();
    double const alpha = params.alpha();
    double const beta = params.beta();
    double const omega_t = omega - alpha - beta;
    if (!(omega_t > 0.0)) {
        throw std::invalid_argument("omega - alpha - beta > 0 required, got " + detail::to_string(omega_t));
    }
    auto const& r = rep.r();
    auto const& s = rep.s();
    auto const dr = derivative(r);
    auto const d2r = derivative(r, 2);
    auto const ds = derivative(s);

    std::vector<double> st(r.size()), wt(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        st[i] = (alpha - beta) * (2.0 * r[i] * s[i] - r[i] * dr[i]);
        double const s2 = s[i] * s[i];
        wt[i] = omega * (s2 - r[i] * ds[i] - dr[i] * s[i]) + alpha * (r[i] * ds[i] + s2) +
                beta * (r[i] * d2r[i] + dr[i] * dr[i] - r[i] * ds[i] - 2.0 * dr[i] * s[i] + s2) + 0.5 * omega;
    }
    return {std::sqrt(omega_t) * r, SampledFunction(r.grid(), std::move(st)), SampledFunction(r.grid(), std::move(wt))};
}

/// Index of the grid point closest to p = 0 (the base of the indefinite integral).
inline std::size_t
origin_index(Grid const& grid)
{
    double const x = -grid.p_min() / grid.h();
    if (x <= 0.0) {
        return 0;
    }
    auto const i = static_cast<std::size_t>(std::lround(x));
    return std::min(i, grid.size() - 1);
}

/// rho = exp(-1/2 int_0^p st/rt^2), cumulative trapezoid from the origin.
/// The base point only rescales rho, which cancels in rho H rho^-1.
inline SampledFunction
similarity_weight(SwansonCoefficients const& coeffs)
{
    auto const& g = coeffs.r_t.grid();
    auto const f = coeffs.s_t / (coeffs.r_t * coeffs.r_t);
    std::size_t const i0 = origin_index(g);
    double const h = g.h();
    std::vector<double> integral(g.size(), 0.0);
    for (std::size_t i = i0 + 1; i < g.size(); ++i) {
        integral[i] = integral[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    }
    for (std::size_t i = i0; i-- > 0;) {
        integral[i] = integral[i + 1] - 0.5 * h * (f[i] + f[i + 1]);
    }
    std::vector<double> rho(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double const e = -0.5 * integral[i];
        if (!(std::abs(e) < 700.0)) {
            throw std::overflow_error("similarity weight exponent overflows at p = " + detail::to_string(g[i]));
        }
        rho[i] = std::exp(e);
    }
    return SampledFunction(g, std::move(rho));
}

/// V = st^2/(4 rt^2) - st'/2 + wt
inline SampledFunction
hermitized_potential(SwansonCoefficients const& coeffs)
{
    auto const rt2 = coeffs.r_t * coeffs.r_t;
    return (coeffs.s_t * coeffs.s_t) / (4.0 * rt2) - 0.5 * derivative(coeffs.s_t) + coeffs.w_t;
}

/// -D rt^2 D + V with unit weight.
inline SturmLiouvilleProblem
hermitized_problem(SwansonCoefficients const& coeffs)
{
    auto const& g = coeffs.r_t.grid();
    return SturmLiouvilleProblem(coeffs.r_t * coeffs.r_t, hermitized_potential(coeffs), SampledFunction(g, 1.0));
}

/// Applies H = -D rt^2 D + st D + wt (conservative stencil for the divergence
/// term, central difference for D); zero at both ends.
inline SampledFunction
apply_swanson_operator(SwansonCoefficients const& coeffs, SampledFunction const& psi)
{
    auto const c = coeffs.r_t * coeffs.r_t;
    auto const& g = psi.grid();
    double const h = g.h();
    std::vector<double> out(psi.size(), 0.0);
    for (std::size_t i = 1; i + 1 < psi.size(); ++i) {
        double const c_minus = 0.5 * (c[i - 1] + c[i]);
        double const c_plus = 0.5 * (c[i] + c[i + 1]);
        double const div = (c_plus * (psi[i + 1] - psi[i]) - c_minus * (psi[i] - psi[i - 1])) / (h * h);
        double const grad = (psi[i + 1] - psi[i - 1]) / (2.0 * h);
        out[i] = -div + coeffs.s_t[i] * grad + coeffs.w_t[i] * psi[i];
    }
    return SampledFunction(g, std::move(out));
}

/// Maps phi back through psi = phi / rho and returns the relative residual
/// ||H psi - lambda psi||_2 / ||psi||_2 over the inner 80% of the grid.
inline double
untransformed_residual(SwansonCoefficients const& coeffs,
                       SampledFunction const& rho,
                       SampledFunction const& phi,
                       double lambda)
{
    auto const psi = phi / rho;
    auto const h_psi = apply_swanson_operator(coeffs, psi);
    auto const range = inner_range(psi.grid());
    double num = 0.0, den = 0.0;
    for (std::size_t i = range.first; i <= range.last; ++i) {
        double const r = h_psi[i] - lambda * psi[i];
        num += r * r;
        den += psi[i] * psi[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

} // namespace gupmdm
