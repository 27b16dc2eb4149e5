#pragma once

// Ordered kinetic operator for a momentum-dependent mass,
//   T = -1/2 [M^a D M^b D M^c + M^c D M^b D M^a],  a + b + c = -1,
// in units where constant mass gives -d^2/dp^2, and its reduction to
// -D (1/M) D plus an ordering-dependent effective potential.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gupmdm/core.hpp"

namespace gupmdm {

/// Ordering parameters; c is always -1 - a - b.
class AmbiguityParams
{
  public:
    AmbiguityParams(double a, double b)
      : a_(a)
      , b_(b)
    {
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw std::invalid_argument("ambiguity parameters must be finite");
        }
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double c() const { return -1.0 - a_ - b_; }

    /// Coefficient of M'^2/M^3 in the effective potential.
    double quadratic_coefficient() const { return a_ * (a_ + b_ + 1.0) + b_ + 1.0; }
    /// Coefficient of M''/M^2.
    double curvature_coefficient() const { return 0.5 * (b_ + 1.0); }

    /// The (c, b) ordering, i.e. the two ordered terms swapped.
    AmbiguityParams swapped() const { return AmbiguityParams(c(), b_); }

  private:
    double a_;
    double b_;
};

/// Dimensionless mass M(p) > 0 with first and second derivatives.
class MassFunction
{
  public:
    /// Derivatives by finite differences.
    explicit MassFunction(SampledFunction m)
      : MassFunction(m, derivative(m, 1), derivative(m, 2))
    {
    }

    MassFunction(SampledFunction m, SampledFunction dm, SampledFunction d2m)
      : m_(std::move(m))
      , dm_(std::move(dm))
      , d2m_(std::move(d2m))
    {
        SampledFunction::require_same_grid(m_, dm_);
        SampledFunction::require_same_grid(m_, d2m_);
        for (std::size_t i = 0; i < m_.size(); ++i) {
            if (!(m_[i] > 0.0)) {
                throw std::invalid_argument("mass must be positive (p = " + detail::to_string(m_.grid()[i]) + ")");
            }
        }
    }

    SampledFunction const& value() const { return m_; }
    SampledFunction const& first() const { return dm_; }
    SampledFunction const& second() const { return d2m_; }
    Grid const& grid() const { return m_.grid(); }

    SampledFunction power(double e) const
    {
        return m_.map([e](double x) { return std::exp(e * std::log(x)); });
    }

  private:
    SampledFunction m_;
    SampledFunction dm_;
    SampledFunction d2m_;
};

/// -1/2 [M^a D M^b D M^c + M^c D M^b D M^a] phi by nested finite differences.
inline SampledFunction
vonroos_apply(MassFunction const& mass, AmbiguityParams const& amb, SampledFunction const& phi)
{
    auto const ma = mass.power(amb.a());
    auto const mb = mass.power(amb.b());
    auto const mc = mass.power(amb.c());
    auto ordered = [&](SampledFunction const& outer, SampledFunction const& inner) {
        return outer * derivative(mb * derivative(inner * phi));
    };
    return -0.5 * (ordered(ma, mc) + ordered(mc, ma));
}

/// V + 1/2 (b+1) M''/M^2 - [a(a+b+1) + b + 1] M'^2/M^3
inline SampledFunction
effective_potential_vonroos(MassFunction const& mass, SampledFunction const& v, AmbiguityParams const& amb)
{
    double const k2 = amb.curvature_coefficient();
    double const k1 = amb.quadratic_coefficient();
    auto const& m = mass.value();
    auto const& dm = mass.first();
    auto const& d2m = mass.second();
    std::vector<double> out(m.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = v[i] + k2 * d2m[i] / (m[i] * m[i]) - k1 * dm[i] * dm[i] / (m[i] * m[i] * m[i]);
    }
    return SampledFunction(m.grid(), std::move(out));
}

/// -D (1/M) D phi + V_eff phi, with the kinetic term expanded as
/// -(1/M) phi'' + (M'/M^2) phi'.
inline SampledFunction
reduced_form_apply(MassFunction const& mass,
                   AmbiguityParams const& amb,
                   SampledFunction const& v,
                   SampledFunction const& phi)
{
    auto const veff = effective_potential_vonroos(mass, v, amb);
    auto const d1 = derivative(phi, 1);
    auto const d2 = derivative(phi, 2);
    auto const& m = mass.value();
    auto const& dm = mass.first();
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -d2[i] / m[i] + dm[i] / (m[i] * m[i]) * d1[i] + veff[i] * phi[i];
    }
    return SampledFunction(phi.grid(), std::move(out));
}

/// The reduced operator as a Sturm-Liouville problem: c = 1/M, q = V_eff.
inline SturmLiouvilleProblem
reduced_sturm_liouville(MassFunction const& mass,
                        AmbiguityParams const& amb,
                        SampledFunction const& v,
                        SampledFunction const& weight)
{
    return SturmLiouvilleProblem(mass.value().map([](double x) { return 1.0 / x; }),
                                 effective_potential_vonroos(mass, v, amb),
                                 weight);
}

} // namespace gupmdm
