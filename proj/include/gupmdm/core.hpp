#pragma once

// Shared vocabulary: uniform momentum grids, sampled functions, the
// Sturm-Liouville problem abstraction and spectra.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gupmdm {

/// Raised when a numerical procedure cannot deliver its result
/// (bracket failure, non-convergence, overflow).
class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string
to_string(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace detail

/// Uniform lattice p_i = p_min + i*h, i = 0..n-1.
class Grid
{
  public:
    Grid(double p_min, double p_max, std::size_t n)
      : p_min_(p_min)
      , p_max_(p_max)
      , n_(n)
    {
        if (!std::isfinite(p_min) || !std::isfinite(p_max)) {
            throw std::invalid_argument("grid bounds must be finite");
        }
        if (!(p_min < p_max)) {
            throw std::invalid_argument("grid requires p_min < p_max");
        }
        if (n < 3) {
            throw std::invalid_argument("grid requires n >= 3, got " + std::to_string(n));
        }
        h_ = (p_max - p_min) / static_cast<double>(n - 1);
    }

    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    std::size_t size() const { return n_; }
    double h() const { return h_; }

    double operator[](std::size_t i) const { return p_min_ + static_cast<double>(i) * h_; }

    std::vector<double> points() const
    {
        std::vector<double> p(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            p[i] = (*this)[i];
        }
        return p;
    }

    /// Same lattice with spacing h/2 (2n-1 points).
    Grid refined() const { return Grid(p_min_, p_max_, 2 * n_ - 1); }

    /// Same lattice with spacing 2h; requires n odd.
    Grid coarsened() const
    {
        if (n_ % 2 == 0 || n_ < 5) {
            throw std::invalid_argument("coarsening requires an odd point count >= 5");
        }
        return Grid(p_min_, p_max_, (n_ + 1) / 2);
    }

    friend bool operator==(Grid const&, Grid const&) = default;

  private:
    double p_min_;
    double p_max_;
    std::size_t n_;
    double h_;
};

inline Grid
make_grid(double p_min, double p_max, std::size_t n)
{
    return Grid(p_min, p_max, n);
}

inline Grid
symmetric_grid(double p_max, std::size_t n)
{
    return Grid(-p_max, p_max, n);
}

/// Index range [first, last] covering the central `fraction` of the grid.
struct IndexRange
{
    std::size_t first;
    std::size_t last;
};

inline IndexRange
inner_range(Grid const& grid, double fraction = 0.8)
{
    double const margin = 0.5 * (1.0 - fraction) * static_cast<double>(grid.size() - 1);
    auto first = static_cast<std::size_t>(std::ceil(margin - 1e-9));
    auto last = grid.size() - 1 - first;
    first = std::max<std::size_t>(first, 1);
    last = std::min(last, grid.size() - 2);
    return {first, last};
}

/// A real function sampled on a Grid. All values are finite.
class SampledFunction
{
  public:
    SampledFunction(Grid const& grid, std::vector<double> values)
      : grid_(grid)
      , values_(std::move(values))
    {
        if (values_.size() != grid_.size()) {
            throw std::invalid_argument("sampled function length " + std::to_string(values_.size()) +
                                        " does not match grid size " + std::to_string(grid_.size()));
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument("non-finite sample at p = " + detail::to_string(grid_[i]));
            }
        }
    }

    /// Constant function.
    SampledFunction(Grid const& grid, double value)
      : SampledFunction(grid, std::vector<double>(grid.size(), value))
    {
    }

    template <typename F>
    static SampledFunction sample(Grid const& grid, F&& f)
    {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            v[i] = f(grid[i]);
        }
        return SampledFunction(grid, std::move(v));
    }

    Grid const& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<double const> values() const { return values_; }

    double max_abs() const
    {
        double m = 0.0;
        for (double v : values_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    double min() const { return *std::min_element(values_.begin(), values_.end()); }

    template <typename F>
    SampledFunction map(F&& f) const
    {
        std::vector<double> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = f(values_[i]);
        }
        return SampledFunction(grid_, std::move(v));
    }

    friend SampledFunction operator+(SampledFunction const& a, SampledFunction const& b)
    {
        return zip(a, b, std::plus<>{});
    }
    friend SampledFunction operator-(SampledFunction const& a, SampledFunction const& b)
    {
        return zip(a, b, std::minus<>{});
    }
    friend SampledFunction operator*(SampledFunction const& a, SampledFunction const& b)
    {
        return zip(a, b, std::multiplies<>{});
    }
    friend SampledFunction operator/(SampledFunction const& a, SampledFunction const& b)
    {
        return zip(a, b, std::divides<>{});
    }
    friend SampledFunction operator*(double s, SampledFunction const& a)
    {
        return a.map([s](double x) { return s * x; });
    }
    friend SampledFunction operator+(SampledFunction const& a, double s)
    {
        return a.map([s](double x) { return x + s; });
    }
    friend SampledFunction operator-(SampledFunction const& a)
    {
        return a.map([](double x) { return -x; });
    }

    template <typename Op>
    static SampledFunction zip(SampledFunction const& a, SampledFunction const& b, Op op)
    {
        require_same_grid(a, b);
        std::vector<double> v(a.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = op(a.values_[i], b.values_[i]);
        }
        return SampledFunction(a.grid_, std::move(v));
    }

    static void require_same_grid(SampledFunction const& a, SampledFunction const& b)
    {
        if (!(a.grid_ == b.grid_)) {
            throw std::invalid_argument("sampled functions live on different grids");
        }
    }

  private:
    Grid grid_;
    std::vector<double> values_;
};

/// Trapezoid approximation of the integral of f*g*w over the grid.
inline double
weighted_inner_product(SampledFunction const& f, SampledFunction const& g, SampledFunction const& w)
{
    SampledFunction::require_same_grid(f, g);
    SampledFunction::require_same_grid(f, w);
    std::size_t const n = f.size();
    double sum = 0.5 * (f[0] * g[0] * w[0] + f[n - 1] * g[n - 1] * w[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        sum += f[i] * g[i] * w[i];
    }
    return sum * f.grid().h();
}

/// First or second derivative: central differences inside, second-order
/// one-sided stencils at both ends.
inline SampledFunction
derivative(SampledFunction const& f, int order = 1)
{
    Grid const& g = f.grid();
    std::size_t const n = g.size();
    if (n < 5) {
        throw std::invalid_argument("derivative requires at least 5 grid points");
    }
    double const h = g.h();
    std::vector<double> d(n);
    if (order == 1) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    } else if (order == 2) {
        double const h2 = h * h;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        }
        d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    } else {
        throw std::invalid_argument("derivative order must be 1 or 2");
    }
    return SampledFunction(g, std::move(d));
}

/// Generalized eigenproblem -(c u')' + q u = lambda w u with Dirichlet
/// conditions at both grid ends.
class SturmLiouvilleProblem
{
  public:
    SturmLiouvilleProblem(SampledFunction c, SampledFunction q, SampledFunction w)
      : c_(std::move(c))
      , q_(std::move(q))
      , w_(std::move(w))
    {
        SampledFunction::require_same_grid(c_, q_);
        SampledFunction::require_same_grid(c_, w_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!(c_[i] > 0.0)) {
                throw std::invalid_argument("diffusion coefficient must be positive (p = " +
                                            detail::to_string(grid()[i]) + ")");
            }
            if (!(w_[i] > 0.0)) {
                throw std::invalid_argument("spectral weight must be positive (p = " +
                                            detail::to_string(grid()[i]) + ")");
            }
        }
    }

    SampledFunction const& c() const { return c_; }
    SampledFunction const& q() const { return q_; }
    SampledFunction const& w() const { return w_; }
    Grid const& grid() const { return c_.grid(); }

  private:
    SampledFunction c_;
    SampledFunction q_;
    SampledFunction w_;
};

/// Number of sign changes of f over the index range, ignoring exact zeros.
inline int
sign_changes(SampledFunction const& f, std::size_t first, std::size_t last, double threshold = 0.0)
{
    int count = 0;
    int prev = 0;
    for (std::size_t i = first; i <= last && i < f.size(); ++i) {
        double const v = f[i];
        if (std::abs(v) <= threshold) {
            continue;
        }
        int const s = v > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) {
            ++count;
        }
        prev = s;
    }
    return count;
}

/// Ascending eigenvalues with w-normalized eigenfunctions.
struct Spectrum
{
    std::vector<double> eigenvalues;
    std::vector<SampledFunction> eigenfunctions;

    std::size_t size() const { return eigenvalues.size(); }
};

} // namespace gupmdm
