#pragma once

// Uniform 1-D grids, sampled functions, finite differences and quadrature.
// Everything downstream (curvature, eigenproblems, bubble energies) is built
// on the operations in this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace muband {

/// Default resolution for verification runs.
inline constexpr int kDefaultGridPoints = 2001;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the valid interval of a profile or grid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Parameter set violates a model constraint.
class ConstraintError : public Error {
public:
    using Error::Error;
};

/// Malformed input (bad argument, bad file, bad config).
class InputError : public Error {
public:
    using Error::Error;
};

/// Closed interval [t_min, t_max] sampled at n_points uniformly spaced nodes.
class Grid {
public:
    Grid(double t_min, double t_max, int n_points)
        : t_min_(t_min), t_max_(t_max), n_(n_points) {
        if (!(t_min < t_max))
            throw InputError("grid: t_min must be strictly less than t_max");
        if (n_points < 3)
            throw InputError("grid: need at least 3 points");
        if (!std::isfinite(t_min) || !std::isfinite(t_max))
            throw InputError("grid: bounds must be finite");
    }

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    int n_points() const { return n_; }
    double spacing() const { return (t_max_ - t_min_) / (n_ - 1); }
    double length() const { return t_max_ - t_min_; }

    /// i-th node; endpoints are reproduced exactly.
    double point(int i) const {
        return ((n_ - 1 - i) * t_min_ + i * t_max_) / (n_ - 1);
    }

    std::vector<double> points() const {
        std::vector<double> p(static_cast<size_t>(n_));
        for (int i = 0; i < n_; ++i) p[static_cast<size_t>(i)] = point(i);
        return p;
    }

    bool contains(double t, double slack = 0.0) const {
        return t >= t_min_ - slack && t <= t_max_ + slack;
    }

    int nearest_index(double t) const {
        int i = static_cast<int>(std::lround((t - t_min_) / spacing()));
        return std::clamp(i, 0, n_ - 1);
    }

    /// Grid restricted to every second node. Requires an odd point count.
    Grid coarsened() const {
        if (n_ % 2 == 0)
            throw InputError("grid: coarsening requires an odd point count");
        return Grid(t_min_, t_max_, (n_ + 1) / 2);
    }

    bool operator==(const Grid& o) const {
        return t_min_ == o.t_min_ && t_max_ == o.t_max_ && n_ == o.n_;
    }

private:
    double t_min_, t_max_;
    int n_;
};

/// Real-valued function sampled on a Grid. Immutable after construction;
/// all values are required to be finite.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.n_points())
            throw InputError("grid function: value count does not match grid");
        for (size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw InputError("grid function: non-finite value at index " +
                                 std::to_string(i));
        }
    }

    template <class F>
    static GridFunction sample(const Grid& grid, F&& f) {
        std::vector<double> v(static_cast<size_t>(grid.n_points()));
        for (int i = 0; i < grid.n_points(); ++i)
            v[static_cast<size_t>(i)] = f(grid.point(i));
        return GridFunction(grid, std::move(v));
    }

    static GridFunction constant(const Grid& grid, double c) {
        return GridFunction(grid,
                            std::vector<double>(static_cast<size_t>(grid.n_points()), c));
    }

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.n_points(); }
    double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
    std::span<const double> values() const { return values_; }

    /// Cubic Lagrange interpolation (4-node window, clamped at the ends).
    double value_at(double t) const {
        const Grid& g = grid_;
        const double slack = 1e-9 * std::max(1.0, std::abs(g.length()));
        if (!g.contains(t, slack))
            throw DomainError("grid function: evaluation outside the interval");
        t = std::clamp(t, g.t_min(), g.t_max());
        const double dt = g.spacing();
        int cell = static_cast<int>(std::floor((t - g.t_min()) / dt));
        cell = std::clamp(cell, 0, g.n_points() - 2);
        int j0 = std::clamp(cell - 1, 0, g.n_points() - 4);
        double r = 0.0;
        for (int j = j0; j < j0 + 4; ++j) {
            double lj = 1.0;
            for (int k = j0; k < j0 + 4; ++k) {
                if (k == j) continue;
                lj *= (t - g.point(k)) / (g.point(j) - g.point(k));
            }
            r += lj * values_[static_cast<size_t>(j)];
        }
        return r;
    }

    double min_value() const {
        return *std::min_element(values_.begin(), values_.end());
    }
    double max_value() const {
        return *std::max_element(values_.begin(), values_.end());
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

namespace detail {

/// Finite-difference weights for the m-th derivative at z from nodes x
/// (Fornberg's recursion).
inline std::vector<double> fd_weights(double z, std::span<const double> x, int m) {
    const int n = static_cast<int>(x.size());
    std::vector<double> c(static_cast<size_t>(n) * (m + 1), 0.0);
    auto C = [&](int j, int k) -> double& {
        return c[static_cast<size_t>(j) * (m + 1) + static_cast<size_t>(k)];
    };
    double c1 = 1.0;
    double c4 = x[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[static_cast<size_t>(i)] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) w[static_cast<size_t>(j)] = C(j, m);
    return w;
}

inline std::vector<double> fd_weights_at_offsets(std::initializer_list<double> offsets,
                                                 int order) {
    std::vector<double> x(offsets);
    return fd_weights(0.0, x, order);
}

/// Integral over [s0, s1] of the Lagrange basis on 4 nodes (unit spacing).
inline std::array<double, 4> lagrange_cell_weights(const std::array<double, 4>& p,
                                                   double s0, double s1) {
    std::array<double, 4> w{};
    for (int j = 0; j < 4; ++j) {
        double coeff[4] = {1.0, 0.0, 0.0, 0.0};
        int deg = 0;
        double denom = 1.0;
        for (int k = 0; k < 4; ++k) {
            if (k == j) continue;
            denom *= p[static_cast<size_t>(j)] - p[static_cast<size_t>(k)];
            for (int d = deg + 1; d >= 1; --d)
                coeff[d] = coeff[d - 1] - p[static_cast<size_t>(k)] * coeff[d];
            coeff[0] *= -p[static_cast<size_t>(k)];
            ++deg;
        }
        double integral = 0.0;
        double s1p = s1, s0p = s0;
        for (int d = 0; d <= 3; ++d) {
            integral += coeff[d] * (s1p - s0p) / (d + 1);
            s1p *= s1;
            s0p *= s0;
        }
        w[static_cast<size_t>(j)] = integral / denom;
    }
    return w;
}

}  // namespace detail

/// First or second derivative on the grid. Central 4th-order stencils in the
/// interior (one-off-center 6-node stencils at the two near-boundary nodes),
/// one-sided 2nd-order stencils at the endpoint nodes.
inline GridFunction derivative(const GridFunction& f, int order) {
    if (order != 1 && order != 2)
        throw InputError("derivative: order must be 1 or 2");
    const int n = f.size();
    if (n < 5)
        throw InputError("derivative: need at least 5 grid points");
    const double dt = f.grid().spacing();
    const double scale = (order == 1) ? 1.0 / dt : 1.0 / (dt * dt);

    const std::vector<double> w_int =
        detail::fd_weights_at_offsets({-2, -1, 0, 1, 2}, order);
    const std::vector<double> w_lo =
        (order == 1) ? detail::fd_weights_at_offsets({0, 1, 2}, 1)
                     : detail::fd_weights_at_offsets({0, 1, 2, 3}, 2);
    std::vector<double> w_hi(w_lo.rbegin(), w_lo.rend());
    if (order == 1)
        for (double& w : w_hi) w = -w;
    const bool wide = n >= 6;
    const std::vector<double> w_near_lo =
        wide ? detail::fd_weights_at_offsets({-1, 0, 1, 2, 3, 4}, order)
             : detail::fd_weights_at_offsets({-1, 0, 1}, order);
    std::vector<double> w_near_hi(w_near_lo.rbegin(), w_near_lo.rend());
    if (order == 1)
        for (double& w : w_near_hi) w = -w;

    std::vector<double> out(static_cast<size_t>(n));
    auto apply = [&](int i, std::span<const double> w, int first_offset) {
        double s = 0.0;
        for (size_t j = 0; j < w.size(); ++j)
            s += w[j] * f[i + first_offset + static_cast<int>(j)];
        return s * scale;
    };
    out[0] = apply(0, w_lo, 0);
    out[1] = apply(1, w_near_lo, -1);
    for (int i = 2; i < n - 2; ++i) out[static_cast<size_t>(i)] = apply(i, w_int, -2);
    out[static_cast<size_t>(n - 2)] =
        apply(n - 2, w_near_hi, -(static_cast<int>(w_near_hi.size()) - 2));
    out[static_cast<size_t>(n - 1)] =
        apply(n - 1, w_hi, -(static_cast<int>(w_hi.size()) - 1));
    return GridFunction(f.grid(), std::move(out));
}

/// Definite integral over [a, b] ⊆ [t_min, t_max]. Composite Simpson over
/// whole cells (3/8 rule absorbs an odd remainder); fractional cells at the
/// ends are integrated with a linear correction.
inline double integrate(const GridFunction& f, double a, double b) {
    const Grid& g = f.grid();
    const double span = g.length();
    const double eps = 1e-12 * std::max(1.0, std::abs(span));
    if (!(a <= b + eps))
        throw InputError("integrate: a must not exceed b");
    if (a < g.t_min() - eps || b > g.t_max() + eps)
        throw DomainError("integrate: [a,b] outside the grid interval");
    a = std::clamp(a, g.t_min(), g.t_max());
    b = std::clamp(b, g.t_min(), g.t_max());
    if (b - a <= 0.0) return 0.0;

    const double dt = g.spacing();
    const int n = g.n_points();
    auto lin = [&](double t) {
        int cell = std::clamp(static_cast<int>(std::floor((t - g.t_min()) / dt)), 0, n - 2);
        double frac = (t - g.point(cell)) / dt;
        return (1.0 - frac) * f[cell] + frac * f[cell + 1];
    };

    int k0 = static_cast<int>(std::ceil((a - g.t_min()) / dt - 1e-9));
    int k1 = static_cast<int>(std::floor((b - g.t_min()) / dt + 1e-9));
    k0 = std::clamp(k0, 0, n - 1);
    k1 = std::clamp(k1, 0, n - 1);

    if (k0 > k1) {
        // both endpoints inside one cell
        return 0.5 * (lin(a) + lin(b)) * (b - a);
    }

    double total = 0.0;
    const double ta = g.point(k0), tb = g.point(k1);
    if (a < ta - 1e-9 * dt) total += 0.5 * (lin(a) + f[k0]) * (ta - a);
    if (b > tb + 1e-9 * dt) total += 0.5 * (f[k1] + lin(b)) * (b - tb);

    int cells = k1 - k0;
    int i = k0;
    if (cells == 1) {
        if (n >= 4) {
            int j0 = std::clamp(i - 1, 0, n - 4);
            std::array<double, 4> pos{};
            for (int j = 0; j < 4; ++j) pos[static_cast<size_t>(j)] = j0 + j - i;
            auto w = detail::lagrange_cell_weights(pos, 0.0, 1.0);
            double s = 0.0;
            for (int j = 0; j < 4; ++j) s += w[static_cast<size_t>(j)] * f[j0 + j];
            total += s * dt;
        } else {
            total += 0.5 * (f[i] + f[i + 1]) * dt;
        }
        return total;
    }
    if (cells % 2 == 1 && cells >= 3) {
        total += 3.0 * dt / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
        i += 3;
        cells -= 3;
    }
    while (cells >= 2) {
        total += dt / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
        i += 2;
        cells -= 2;
    }
    return total;
}

/// Cumulative integral from t_min, node by node, using a cubic 4-node rule
/// per cell (4th-order accurate).
inline GridFunction cumulative_integral(const GridFunction& f) {
    const Grid& g = f.grid();
    const int n = g.n_points();
    if (n < 4) {
        // trapezoid fallback for very small grids
        std::vector<double> acc(static_cast<size_t>(n), 0.0);
        for (int i = 1; i < n; ++i)
            acc[static_cast<size_t>(i)] =
                acc[static_cast<size_t>(i - 1)] + 0.5 * (f[i - 1] + f[i]) * g.spacing();
        return GridFunction(g, std::move(acc));
    }
    const double dt = g.spacing();
    const auto w_first =
        detail::lagrange_cell_weights({0.0, 1.0, 2.0, 3.0}, 0.0, 1.0);
    const auto w_mid =
        detail::lagrange_cell_weights({-1.0, 0.0, 1.0, 2.0}, 0.0, 1.0);
    const auto w_last =
        detail::lagrange_cell_weights({-2.0, -1.0, 0.0, 1.0}, 0.0, 1.0);

    std::vector<double> acc(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n - 1; ++i) {
        const std::array<double, 4>* w = &w_mid;
        int j0 = i - 1;
        if (i == 0) {
            w = &w_first;
            j0 = 0;
        } else if (i == n - 2) {
            w = &w_last;
            j0 = n - 4;
        }
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += (*w)[static_cast<size_t>(j)] * f[j0 + j];
        acc[static_cast<size_t>(i + 1)] = acc[static_cast<size_t>(i)] + s * dt;
    }
    return GridFunction(g, std::move(acc));
}

inline std::string format_17g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// CSV rows `t,value` with 17 significant digits.
inline void write_csv(std::ostream& os, const GridFunction& f) {
    os << "t,value\n";
    for (int i = 0; i < f.size(); ++i)
        os << format_17g(f.grid().point(i)) << ',' << format_17g(f[i]) << '\n';
}

}  // namespace muband
