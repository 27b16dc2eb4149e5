#pragma once

// Spectra of Sturm-Liouville problems by two independent routes:
//  * a conservative three-point discretization solved as a symmetric
//    tridiagonal generalized eigenproblem (Sturm bisection + inverse iteration)
//  * shooting with a fixed-step RK4 integrator, node-count bracketing and
//    a matched-Wronskian refinement.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gupmdm/core.hpp"
#include "gupmdm/models.hpp"

namespace gupmdm {

/// A u = lambda B u on the n-2 interior points. A is symmetric tridiagonal
/// (diag, off), B is diagonal (b).
struct DiscretizedPair
{
    Grid grid;
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> b;

    std::size_t dimension() const { return diag.size(); }
};

inline DiscretizedPair
discretize(SturmLiouvilleProblem const& slp)
{
    Grid const& g = slp.grid();
    std::size_t const n = g.size();
    std::size_t const m = n - 2;
    double const h2 = g.h() * g.h();
    auto const& c = slp.c();

    DiscretizedPair pair{g, std::vector<double>(m), std::vector<double>(m > 0 ? m - 1 : 0), std::vector<double>(m)};
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t const i = k + 1;
        double const c_minus = 0.5 * (c[i - 1] + c[i]);
        double const c_plus = 0.5 * (c[i] + c[i + 1]);
        pair.diag[k] = (c_minus + c_plus) / h2 + slp.q()[i];
        pair.b[k] = slp.w()[i];
        if (k + 1 < m) {
            pair.off[k] = -c_plus / h2;
        }
    }
    return pair;
}

/// -(c u')' + q u by the same conservative stencil used in discretize();
/// zero at both ends.
inline SampledFunction
apply_operator(SturmLiouvilleProblem const& slp, SampledFunction const& u)
{
    SampledFunction::require_same_grid(slp.c(), u);
    auto const& c = slp.c();
    std::size_t const n = u.size();
    double const h2 = u.grid().h() * u.grid().h();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double const c_minus = 0.5 * (c[i - 1] + c[i]);
        double const c_plus = 0.5 * (c[i] + c[i + 1]);
        out[i] = -(c_plus * (u[i + 1] - u[i]) - c_minus * (u[i] - u[i - 1])) / h2 + slp.q()[i] * u[i];
    }
    return SampledFunction(u.grid(), std::move(out));
}

namespace detail {

/// Symmetric tridiagonal matrix (B^-1/2 A B^-1/2).
struct Tridiagonal
{
    std::vector<double> d;
    std::vector<double> e;

    std::size_t size() const { return d.size(); }

    double norm_inf() const
    {
        double m = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            double r = std::abs(d[i]);
            if (i > 0) {
                r += std::abs(e[i - 1]);
            }
            if (i + 1 < d.size()) {
                r += std::abs(e[i]);
            }
            m = std::max(m, r);
        }
        return m;
    }
};

inline Tridiagonal
symmetrize(DiscretizedPair const& pair)
{
    Tridiagonal t{std::vector<double>(pair.dimension()), std::vector<double>(pair.off.size())};
    for (std::size_t i = 0; i < t.d.size(); ++i) {
        t.d[i] = pair.diag[i] / pair.b[i];
    }
    for (std::size_t i = 0; i < t.e.size(); ++i) {
        t.e[i] = pair.off[i] / std::sqrt(pair.b[i] * pair.b[i + 1]);
    }
    return t;
}

/// Number of eigenvalues of t strictly below x (Sturm sequence count).
inline std::size_t
sturm_count(Tridiagonal const& t, double x, double pivmin)
{
    std::size_t count = 0;
    double q = t.d[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (std::abs(q) < pivmin) {
            q = -pivmin;
        }
        if (q < 0.0) {
            ++count;
        }
        if (i + 1 == t.size()) {
            break;
        }
        q = t.d[i + 1] - x - t.e[i] * t.e[i] / q;
    }
    return count;
}

/// Solves (t - shift I) y = rhs by Gaussian elimination with partial pivoting.
inline std::vector<double>
shifted_solve(Tridiagonal const& t, double shift, std::vector<double> rhs, double pivmin)
{
    std::size_t const m = t.size();
    // Row i of U holds up to three entries: u0 (diagonal), u1, u2.
    std::vector<double> u0(m), u1(m, 0.0), u2(m, 0.0), lower(m, 0.0);

    // The active pivot row only ever has entries in columns i and i+1.
    double d = t.d[0] - shift;
    double up = m > 1 ? t.e[0] : 0.0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
        double const sub = t.e[i];
        double const next_d = t.d[i + 1] - shift;
        double const next_up = i + 2 < m ? t.e[i + 1] : 0.0;
        if (std::abs(d) >= std::abs(sub)) {
            if (std::abs(d) < pivmin) {
                d = pivmin;
            }
            double const l = sub / d;
            lower[i] = l;
            u0[i] = d;
            u1[i] = up;
            d = next_d - l * up;
            up = next_up;
        } else {
            double const l = d / sub;
            lower[i] = l;
            u0[i] = sub;
            u1[i] = next_d;
            u2[i] = next_up;
            d = up - l * next_d;
            up = -l * next_up;
            std::swap(rhs[i], rhs[i + 1]);
        }
        rhs[i + 1] -= lower[i] * rhs[i];
    }
    if (std::abs(d) < pivmin) {
        d = pivmin;
    }
    u0[m - 1] = d;

    std::vector<double> y(m);
    for (std::size_t k = m; k-- > 0;) {
        double s = rhs[k];
        if (k + 1 < m) {
            s -= u1[k] * y[k + 1];
        }
        if (k + 2 < m) {
            s -= u2[k] * y[k + 2];
        }
        y[k] = s / u0[k];
    }
    return y;
}

inline double
norm2(std::vector<double> const& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x * x;
    }
    return std::sqrt(s);
}

} // namespace detail

struct EigenOptions
{
    int max_inverse_iterations = 12;
};

/// Lowest k generalized eigenpairs of the discretized pair. Eigenfunctions
/// are normalized by the trapezoid rule against w and signed so that the
/// first sample above 1e-3 of the peak is positive.
inline Spectrum
eigen_solve(DiscretizedPair const& pair, std::size_t k, EigenOptions const& opts = {})
{
    std::size_t const m = pair.dimension();
    if (k == 0 || k > m) {
        throw std::invalid_argument("eigen_solve: requested " + std::to_string(k) + " eigenpairs from dimension " +
                                    std::to_string(m));
    }
    auto const t = detail::symmetrize(pair);
    double const tnorm = t.norm_inf();
    double const eps = std::numeric_limits<double>::epsilon();
    double const pivmin = std::max(std::numeric_limits<double>::min(), eps * eps * tnorm);

    double glo = t.d[0], ghi = t.d[0];
    for (std::size_t i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) {
            r += std::abs(t.e[i - 1]);
        }
        if (i + 1 < m) {
            r += std::abs(t.e[i]);
        }
        glo = std::min(glo, t.d[i] - r);
        ghi = std::max(ghi, t.d[i] + r);
    }
    glo -= 2.0 * eps * tnorm + pivmin;
    ghi += 2.0 * eps * tnorm + pivmin;

    Spectrum spec;
    std::vector<std::vector<double>> vectors;
    double floor = glo;
    for (std::size_t j = 0; j < k; ++j) {
        double lo = floor, hi = ghi;
        for (int it = 0; it < 400; ++it) {
            double const tol = 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + pivmin;
            if (hi - lo <= tol) {
                break;
            }
            double const mid = 0.5 * (lo + hi);
            if (detail::sturm_count(t, mid, pivmin) > j) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        double const lambda = 0.5 * (lo + hi);
        floor = lo;

        std::vector<double> x(m);
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = 1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i) + static_cast<double>(j));
        }
        double nx = detail::norm2(x);
        for (double& v : x) {
            v /= nx;
        }
        double const gap_tol = 1e-6 * std::max(1.0, tnorm);
        bool converged = false;
        for (int it = 0; it < opts.max_inverse_iterations; ++it) {
            auto y = detail::shifted_solve(t, lambda, x, pivmin);
            for (std::size_t p = 0; p < vectors.size(); ++p) {
                if (std::abs(spec.eigenvalues[p] - lambda) < gap_tol) {
                    double dot = 0.0;
                    for (std::size_t i = 0; i < m; ++i) {
                        dot += y[i] * vectors[p][i];
                    }
                    for (std::size_t i = 0; i < m; ++i) {
                        y[i] -= dot * vectors[p][i];
                    }
                }
            }
            double const ny = detail::norm2(y);
            for (std::size_t i = 0; i < m; ++i) {
                x[i] = y[i] / ny;
            }
            // Residual of the normalized iterate.
            double res = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double r = (t.d[i] - lambda) * x[i];
                if (i > 0) {
                    r += t.e[i - 1] * x[i - 1];
                }
                if (i + 1 < m) {
                    r += t.e[i] * x[i + 1];
                }
                res = std::max(res, std::abs(r));
            }
            if (it >= 2 && res <= 1e3 * eps * tnorm) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw SolverError("inverse iteration did not converge for eigenvalue index " + std::to_string(j));
        }
        vectors.push_back(x);

        Grid const& g = pair.grid;
        std::vector<double> phi(g.size(), 0.0);
        double const scale = 1.0 / std::sqrt(g.h());
        for (std::size_t i = 0; i < m; ++i) {
            phi[i + 1] = x[i] / std::sqrt(pair.b[i]) * scale;
        }
        double peak = 0.0;
        for (double v : phi) {
            peak = std::max(peak, std::abs(v));
        }
        for (double v : phi) {
            if (std::abs(v) > 1e-3 * peak) {
                if (v < 0.0) {
                    for (double& s : phi) {
                        s = -s;
                    }
                }
                break;
            }
        }
        spec.eigenvalues.push_back(lambda);
        spec.eigenfunctions.emplace_back(g, std::move(phi));
    }
    return spec;
}

inline Spectrum
eigen_solve(SturmLiouvilleProblem const& slp, std::size_t k)
{
    return eigen_solve(discretize(slp), k);
}

/// Second-order Richardson extrapolation from spacings h and h/2.
inline double
richardson(double e_h, double e_h2)
{
    return (4.0 * e_h2 - e_h) / 3.0;
}

/// Lowest k eigenvalues from grid and grid.coarsened(), Richardson-combined.
inline std::vector<double>
extrapolated_eigenvalues(std::function<SturmLiouvilleProblem(Grid const&)> const& build,
                         Grid const& fine,
                         std::size_t k)
{
    auto const coarse = eigen_solve(build(fine.coarsened()), k);
    auto const dense = eigen_solve(build(fine), k);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j] = richardson(coarse.eigenvalues[j], dense.eigenvalues[j]);
    }
    return out;
}

struct ShootingOptions
{
    double tolerance = 1e-10;
    int max_doublings = 60;
    int max_iterations = 1000;
    /// Solutions are rescaled once they exceed this magnitude.
    double rescale_threshold = 1e100;
};

struct ShootingReport
{
    double eigenvalue = 0.0;
    int node_count = 0;
    double mismatch = 0.0;
    int iterations = 0;
};

/// Integrates the first-order system u' = y/c, y' = (q - lambda w) u
/// across the grid with RK4 (step h). Coefficients at half steps come from
/// four-point Lagrange interpolation of the samples.
class Shooter
{
  public:
    explicit Shooter(SturmLiouvilleProblem const& slp, ShootingOptions opts = {})
      : grid_(slp.grid())
      , opts_(opts)
    {
        std::size_t const n = grid_.size();
        auto copy = [](SampledFunction const& f) { return std::vector<double>(f.values().begin(), f.values().end()); };
        c_ = copy(slp.c());
        q_ = copy(slp.q());
        w_ = copy(slp.w());
        cm_ = midpoints(c_);
        qm_ = midpoints(q_);
        wm_ = midpoints(w_);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(cm_[i] > 0.0)) {
                throw SolverError("interpolated diffusion coefficient is not positive near p = " +
                                  detail::to_string(grid_[i]));
            }
        }
        match_ = (n - 1) / 2;
    }

    Grid const& grid() const { return grid_; }
    std::size_t match_index() const { return match_; }

    /// Number of sign changes of the left-launched solution over (p_min, p_max];
    /// equals the number of eigenvalues below lambda.
    int count_below(double lambda) const
    {
        std::vector<double> u;
        integrate(lambda, 0, grid_.size() - 1, &u);
        return sign_changes_of(u);
    }

    /// Normalized Wronskian of the left and right solutions at the matching
    /// point; zero exactly at eigenvalues and free of poles.
    double mismatch(double lambda) const
    {
        auto [ul, yl] = integrate(lambda, 0, match_, nullptr);
        auto [ur, yr] = integrate(lambda, grid_.size() - 1, match_, nullptr);
        double const nl = std::hypot(ul, yl);
        double const nr = std::hypot(ur, yr);
        return (ul * yr - yl * ur) / (nl * nr);
    }

    /// Eigenfunction assembled from both sides, w-normalized.
    SampledFunction eigenfunction(double lambda) const
    {
        std::size_t const n = grid_.size();
        std::vector<double> left, right;
        auto [ul, yl] = integrate(lambda, 0, match_, &left);
        auto [ur, yr] = integrate(lambda, n - 1, match_, &right);
        // (ul, yl) and (ur, yr) are parallel at an eigenvalue.
        double const s = std::abs(ur) >= std::abs(yr) ? ul / ur : yl / yr;
        std::vector<double> u(n);
        for (std::size_t i = 0; i <= match_; ++i) {
            u[i] = left[i];
        }
        // right[] is stored from p_max inward.
        for (std::size_t i = match_ + 1; i < n; ++i) {
            u[i] = s * right[n - 1 - i];
        }
        SampledFunction f(grid_, std::move(u));
        SampledFunction w(grid_, w_);
        double const norm = std::sqrt(weighted_inner_product(f, f, w));
        return (1.0 / norm) * f;
    }

  private:
    static std::vector<double> midpoints(std::vector<double> const& f)
    {
        std::size_t const n = f.size();
        std::vector<double> m(n - 1);
        if (n < 4) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                m[i] = 0.5 * (f[i] + f[i + 1]);
            }
            return m;
        }
        m[0] = (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0;
        for (std::size_t i = 1; i + 2 < n; ++i) {
            m[i] = (-f[i - 1] + 9.0 * f[i] + 9.0 * f[i + 1] - f[i + 2]) / 16.0;
        }
        m[n - 2] = (5.0 * f[n - 1] + 15.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 16.0;
        return m;
    }

    static int sign_changes_of(std::vector<double> const& u)
    {
        int count = 0;
        int prev = 0;
        for (std::size_t i = 1; i < u.size(); ++i) {
            if (u[i] == 0.0) {
                continue;
            }
            int const s = u[i] > 0.0 ? 1 : -1;
            if (prev != 0 && s != prev) {
                ++count;
            }
            prev = s;
        }
        return count;
    }

    /// Integrates from index `from` to index `to` starting with u = 0,
    /// y = +1 (left launch) or y = -1 (right launch). If `trace` is given
    /// it receives u at every visited point, in visiting order.
    std::pair<double, double> integrate(double lambda, std::size_t from, std::size_t to, std::vector<double>* trace) const
    {
        bool const forward = to >= from;
        double const h = forward ? grid_.h() : -grid_.h();
        double u = 0.0;
        double y = forward ? 1.0 : -1.0;
        if (trace) {
            trace->clear();
            trace->reserve((forward ? to - from : from - to) + 1);
            trace->push_back(u);
        }
        auto rhs_u = [](double c, double yy) { return yy / c; };
        auto rhs_y = [lambda](double q, double w, double uu) { return (q - lambda * w) * uu; };

        std::size_t i = from;
        while (i != to) {
            std::size_t const j = forward ? i + 1 : i - 1;
            std::size_t const mid = forward ? i : j;
            double const c0 = c_[i], q0 = q_[i], w0 = w_[i];
            double const c1 = cm_[mid], q1 = qm_[mid], w1 = wm_[mid];
            double const c2 = c_[j], q2 = q_[j], w2 = w_[j];

            double const k1u = rhs_u(c0, y);
            double const k1y = rhs_y(q0, w0, u);
            double const k2u = rhs_u(c1, y + 0.5 * h * k1y);
            double const k2y = rhs_y(q1, w1, u + 0.5 * h * k1u);
            double const k3u = rhs_u(c1, y + 0.5 * h * k2y);
            double const k3y = rhs_y(q1, w1, u + 0.5 * h * k2u);
            double const k4u = rhs_u(c2, y + h * k3y);
            double const k4y = rhs_y(q2, w2, u + h * k3u);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);

            if (!std::isfinite(u) || !std::isfinite(y)) {
                throw SolverError("shooting solution overflowed at p = " + detail::to_string(grid_[j]));
            }
            double const mag = std::max(std::abs(u), std::abs(y));
            if (mag > opts_.rescale_threshold) {
                double const s = 1.0 / mag;
                u *= s;
                y *= s;
                if (trace) {
                    for (double& v : *trace) {
                        v *= s;
                    }
                }
            }
            if (trace) {
                trace->push_back(u);
            }
            i = j;
        }
        return {u, y};
    }

    Grid grid_;
    ShootingOptions opts_;
    std::vector<double> c_, q_, w_;
    std::vector<double> cm_, qm_, wm_;
    std::size_t match_;
};

/// n-th eigenvalue (n = 0 is the ground state) by shooting.
inline ShootingReport
shooting_eigenvalue(SturmLiouvilleProblem const& slp, int n, ShootingOptions const& opts = {})
{
    if (n < 0) {
        throw std::invalid_argument("shooting_eigenvalue: index must be non-negative");
    }
    Shooter const shooter(slp, opts);
    ShootingReport report;

    double lower = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slp.grid().size(); ++i) {
        lower = std::min(lower, slp.q()[i] / slp.w()[i]);
    }
    double width = std::max(1.0, std::abs(lower));
    double lo = lower - width;
    int doublings = 0;
    while (shooter.count_below(lo) > n) {
        if (++doublings > opts.max_doublings) {
            throw SolverError("shooting: could not bracket eigenvalue " + std::to_string(n) + " from below (reached " +
                              detail::to_string(lo) + ")");
        }
        width *= 2.0;
        lo = lower - width;
    }
    width = std::max(1.0, std::abs(lo));
    double hi = lo + width;
    while (shooter.count_below(hi) <= n) {
        if (++doublings > opts.max_doublings) {
            throw SolverError("shooting: could not bracket eigenvalue " + std::to_string(n) + " in [" +
                              detail::to_string(lo) + ", " + detail::to_string(hi) + "]");
        }
        width *= 2.0;
        hi = lo + width;
    }

    auto converged = [&](double a, double b) {
        return b - a < opts.tolerance * std::max(1.0, std::abs(0.5 * (a + b)));
    };

    // Narrow until the bracket isolates exactly one eigenvalue.
    int count_lo = shooter.count_below(lo);
    int count_hi = shooter.count_below(hi);
    while (!(count_lo == n && count_hi == n + 1) && !converged(lo, hi)) {
        if (++report.iterations > opts.max_iterations) {
            throw SolverError("shooting: node-count bisection exceeded iteration cap for index " + std::to_string(n));
        }
        double const mid = 0.5 * (lo + hi);
        int const c = shooter.count_below(mid);
        if (c <= n) {
            lo = mid;
            count_lo = c;
        } else {
            hi = mid;
            count_hi = c;
        }
    }

    double d_lo = shooter.mismatch(lo);
    double const d_hi = shooter.mismatch(hi);
    bool const use_mismatch = (d_lo < 0.0) != (d_hi < 0.0);
    while (!converged(lo, hi)) {
        if (++report.iterations > opts.max_iterations) {
            throw SolverError("shooting: bisection exceeded iteration cap for index " + std::to_string(n));
        }
        double const mid = 0.5 * (lo + hi);
        if (use_mismatch) {
            double const d = shooter.mismatch(mid);
            if ((d < 0.0) == (d_lo < 0.0)) {
                lo = mid;
                d_lo = d;
            } else {
                hi = mid;
            }
        } else if (shooter.count_below(mid) <= n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    report.eigenvalue = 0.5 * (lo + hi);
    report.mismatch = shooter.mismatch(report.eigenvalue);
    auto const phi = shooter.eigenfunction(report.eigenvalue);
    report.node_count = sign_changes(phi, 1, phi.size() - 2, 1e-10 * phi.max_abs());
    return report;
}

/// Relative max-norm residual max|a2 u'' + a1 u' - (a0P - lambda a0E) u| / max|u|
/// over the inner 80% of the grid.
inline double
residual(RawOdeCoefficients const& coeffs, SampledFunction const& phi, double lambda)
{
    SampledFunction::require_same_grid(coeffs.a2, phi);
    double const scale = phi.max_abs();
    if (scale == 0.0) {
        return 0.0;
    }
    auto const d1 = derivative(phi, 1);
    auto const d2 = derivative(phi, 2);
    auto const range = inner_range(phi.grid());
    double worst = 0.0;
    for (std::size_t i = range.first; i <= range.last; ++i) {
        double const r = coeffs.a2[i] * d2[i] + coeffs.a1[i] * d1[i] -
                         (coeffs.a0P[i] - lambda * coeffs.a0E[i]) * phi[i];
        worst = std::max(worst, std::abs(r));
    }
    return worst / scale;
}

} // namespace gupmdm
