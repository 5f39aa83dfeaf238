#pragma once

// Band metrics dt^2 + (warps)^2 * (flat torus) and their curvature.
//
// For the doubly warped case (n = 3, warps phi1, phi2) the Ricci tensor is
// diagonal in the frame {d/dt, phi1^-1 d/ds1, phi2^-1 d/ds2} with entries
//
//   Ric(dt,dt)   = -(phi1''/phi1 + phi2''/phi2)
//   Ric(e1,e1)   = -(phi1''/phi1 + phi1' phi2'/(phi1 phi2))
//   Ric(e2,e2)   = -(phi2''/phi2 + phi1' phi2'/(phi1 phi2))
//
// cross-checked against a finite-difference Riemann-tensor oracle below.

#include <cmath>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "muband/grid.hpp"

namespace muband {

class DimensionError : public Error {
public:
    using Error::Error;
};

struct DoublyWarped {
    GridFunction phi1;
    GridFunction phi2;
};

struct SingleWarp {
    GridFunction xi;
};

/// Cohomogeneity-one torical band: interval [t_-, t_+] times a flat torus,
/// with one or two warp profiles. Warps must be strictly positive on the
/// open interval (they may vanish at the two boundary nodes).
struct Band {
    int dimension = 3;
    Grid grid;
    std::variant<DoublyWarped, SingleWarp> warp;
    std::vector<double> fiber_lengths;

    Band(int dim, Grid g, std::variant<DoublyWarped, SingleWarp> w,
         std::vector<double> lengths = {})
        : dimension(dim), grid(g), warp(std::move(w)), fiber_lengths(std::move(lengths)) {
        if (dimension < 3)
            throw DimensionError("band: dimension must be at least 3");
        if (doubly() && dimension != 3)
            throw DimensionError("band: doubly warped metrics require n = 3");
        if (fiber_lengths.empty())
            fiber_lengths.assign(static_cast<size_t>(dimension - 1), 1.0);
        if (static_cast<int>(fiber_lengths.size()) != dimension - 1)
            throw InputError("band: need n-1 fiber lengths");
        for (double len : fiber_lengths)
            if (!(len > 0.0)) throw InputError("band: fiber lengths must be positive");
        auto check_positive = [&](const GridFunction& f, const char* name) {
            if (!(f.grid() == grid))
                throw InputError(std::string("band: warp ") + name +
                                 " sampled on a different grid");
            for (int i = 1; i + 1 < f.size(); ++i)
                if (!(f[i] > 0.0))
                    throw InputError(std::string("band: warp ") + name +
                                     " must be positive on the open interval (node " +
                                     std::to_string(i) + ")");
            if (f[0] < 0.0 || f[f.size() - 1] < 0.0)
                throw InputError(std::string("band: warp ") + name +
                                 " negative at a boundary node");
        };
        if (doubly()) {
            check_positive(std::get<DoublyWarped>(warp).phi1, "phi1");
            check_positive(std::get<DoublyWarped>(warp).phi2, "phi2");
        } else {
            check_positive(std::get<SingleWarp>(warp).xi, "xi");
        }
    }

    bool doubly() const { return std::holds_alternative<DoublyWarped>(warp); }
    const GridFunction& phi1() const { return std::get<DoublyWarped>(warp).phi1; }
    const GridFunction& phi2() const { return std::get<DoublyWarped>(warp).phi2; }
    const GridFunction& xi() const { return std::get<SingleWarp>(warp).xi; }

    /// Intrinsic width of the band (the metric is dt^2 + fiber).
    double width() const { return grid.length(); }

    /// phi1*phi2 or xi^(n-1): the fiber volume density entering the
    /// Sturm-Liouville weight.
    GridFunction warp_density() const {
        const int n = grid.n_points();
        std::vector<double> w(static_cast<size_t>(n));
        if (doubly()) {
            for (int i = 0; i < n; ++i)
                w[static_cast<size_t>(i)] = phi1()[i] * phi2()[i];
        } else {
            for (int i = 0; i < n; ++i)
                w[static_cast<size_t>(i)] = std::pow(xi()[i], dimension - 1);
        }
        return GridFunction(grid, std::move(w));
    }

    /// Fiber volume (product of circle lengths times the warp density).
    GridFunction fiber_area() const {
        double lens = 1.0;
        for (double len : fiber_lengths) lens *= len;
        GridFunction w = warp_density();
        std::vector<double> a(w.values().begin(), w.values().end());
        for (double& v : a) v *= lens;
        return GridFunction(grid, std::move(a));
    }
};

/// Curvature of the band and of its t-slices along the interval.
struct CurvatureProfile {
    GridFunction ric_t;                   // Ric(dt, dt)
    std::vector<GridFunction> ric_fiber;  // Ric(e_i, e_i), orthonormal fiber frame
    GridFunction ric_min;                 // pointwise min of the diagonal entries
    GridFunction scalar;                  // ambient scalar curvature
    GridFunction mean_curv;               // H of the t-slice w.r.t. nu = dt
    GridFunction second_ff_sq;            // |A|^2
    GridFunction traceless_A_sq;          // |A^0|^2 = |A|^2 - H^2/(n-1)
};

/// H = sum of warp logarithmic derivatives (cheap; no full profile needed).
inline GridFunction mean_curvature(const Band& band) {
    const int n = band.grid.n_points();
    std::vector<double> h(static_cast<size_t>(n));
    if (band.doubly()) {
        GridFunction d1 = derivative(band.phi1(), 1);
        GridFunction d2 = derivative(band.phi2(), 1);
        for (int i = 0; i < n; ++i)
            h[static_cast<size_t>(i)] = d1[i] / band.phi1()[i] + d2[i] / band.phi2()[i];
    } else {
        GridFunction d = derivative(band.xi(), 1);
        for (int i = 0; i < n; ++i)
            h[static_cast<size_t>(i)] = (band.dimension - 1) * d[i] / band.xi()[i];
    }
    return GridFunction(band.grid, std::move(h));
}

inline CurvatureProfile curvature_doubly_warped(const Band& band) {
    if (!band.doubly())
        throw DimensionError("curvature_doubly_warped: band is singly warped");
    const Grid& g = band.grid;
    const int n = g.n_points();
    const GridFunction& p1 = band.phi1();
    const GridFunction& p2 = band.phi2();
    GridFunction d1 = derivative(p1, 1), dd1 = derivative(p1, 2);
    GridFunction d2 = derivative(p2, 1), dd2 = derivative(p2, 2);

    std::vector<double> rt(static_cast<size_t>(n)), rf1(static_cast<size_t>(n)),
        rf2(static_cast<size_t>(n)), rmin(static_cast<size_t>(n)),
        sc(static_cast<size_t>(n)), hh(static_cast<size_t>(n)),
        asq(static_cast<size_t>(n)), a0(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double l1 = d1[i] / p1[i], l2 = d2[i] / p2[i];
        const double q1 = dd1[i] / p1[i], q2 = dd2[i] / p2[i];
        rt[k] = -(q1 + q2);
        rf1[k] = -(q1 + l1 * l2);
        rf2[k] = -(q2 + l1 * l2);
        rmin[k] = std::min(rt[k], std::min(rf1[k], rf2[k]));
        sc[k] = rt[k] + rf1[k] + rf2[k];
        hh[k] = l1 + l2;
        asq[k] = l1 * l1 + l2 * l2;
        a0[k] = asq[k] - 0.5 * hh[k] * hh[k];
    }
    return CurvatureProfile{GridFunction(g, std::move(rt)),
                            {GridFunction(g, std::move(rf1)), GridFunction(g, std::move(rf2))},
                            GridFunction(g, std::move(rmin)),
                            GridFunction(g, std::move(sc)),
                            GridFunction(g, std::move(hh)),
                            GridFunction(g, std::move(asq)),
                            GridFunction(g, std::move(a0))};
}

inline CurvatureProfile curvature_single_warp(const Band& band) {
    if (band.doubly())
        throw DimensionError("curvature_single_warp: band is doubly warped");
    const Grid& g = band.grid;
    const int n = g.n_points();
    const int dim = band.dimension;
    const GridFunction& xi = band.xi();
    GridFunction d = derivative(xi, 1), dd = derivative(xi, 2);

    std::vector<double> rt(static_cast<size_t>(n)), rf(static_cast<size_t>(n)),
        rmin(static_cast<size_t>(n)), sc(static_cast<size_t>(n)),
        hh(static_cast<size_t>(n)), asq(static_cast<size_t>(n)),
        a0(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const size_t k = static_cast<size_t>(i);
        const double lx = d[i] / xi[i], qx = dd[i] / xi[i];
        rt[k] = -(dim - 1) * qx;
        rf[k] = -(qx + (dim - 2) * lx * lx);
        rmin[k] = std::min(rt[k], rf[k]);
        sc[k] = -2.0 * (dim - 1) * qx - (dim - 1) * (dim - 2) * lx * lx;
        hh[k] = (dim - 1) * lx;
        asq[k] = (dim - 1) * lx * lx;
        a0[k] = asq[k] - hh[k] * hh[k] / (dim - 1);
    }
    GridFunction fiber(g, std::move(rf));
    std::vector<GridFunction> fibers(static_cast<size_t>(dim - 1), fiber);
    return CurvatureProfile{GridFunction(g, std::move(rt)),
                            std::move(fibers),
                            GridFunction(g, std::move(rmin)),
                            GridFunction(g, std::move(sc)),
                            GridFunction(g, std::move(hh)),
                            GridFunction(g, std::move(asq)),
                            GridFunction(g, std::move(a0))};
}

inline CurvatureProfile curvature(const Band& band) {
    return band.doubly() ? curvature_doubly_warped(band) : curvature_single_warp(band);
}

/// Ambient curvature at one grid node computed from second differences of the
/// metric components alone (no warped-product formulas). Used as an
/// independent oracle for the closed-form operations; accurate to O(dt^2).
struct OracleCurvature {
    double t = 0.0;
    std::vector<double> ricci_diag;  // orthonormal-frame Ricci diagonal, dt first
    double scalar = 0.0;
};

inline OracleCurvature riemann_fd_oracle(const Band& band, double t) {
    const Grid& g = band.grid;
    const int n = g.n_points();
    const int k = g.nearest_index(t);
    if (k < 2 || k > n - 3)
        throw DomainError("riemann_fd_oracle: need at least 2*dt clearance from the ends");
    const int dim = band.dimension;
    const double dt = g.spacing();

    auto metric_diag = [&](int node) {
        std::vector<double> gd(static_cast<size_t>(dim));
        gd[0] = 1.0;
        if (band.doubly()) {
            gd[1] = band.phi1()[node] * band.phi1()[node];
            gd[2] = band.phi2()[node] * band.phi2()[node];
        } else {
            for (int a = 1; a < dim; ++a)
                gd[static_cast<size_t>(a)] = band.xi()[node] * band.xi()[node];
        }
        return gd;
    };

    // Christoffel symbols at a node; only the t-derivative of the metric is
    // nonzero, approximated by a centered difference.
    auto christoffel = [&](int node) {
        std::vector<double> gd = metric_diag(node);
        std::vector<double> gp = metric_diag(node + 1), gm = metric_diag(node - 1);
        std::vector<double> dgdt(static_cast<size_t>(dim));
        for (int a = 0; a < dim; ++a)
            dgdt[static_cast<size_t>(a)] =
                (gp[static_cast<size_t>(a)] - gm[static_cast<size_t>(a)]) / (2.0 * dt);
        // dg[c][a][b] = partial_c g_ab, diagonal metric depending on t only
        std::vector<double> gamma(static_cast<size_t>(dim * dim * dim), 0.0);
        auto G = [&](int l, int i, int j) -> double& {
            return gamma[static_cast<size_t>((l * dim + i) * dim + j)];
        };
        auto dg = [&](int c, int a, int b) {
            return (c == 0 && a == b) ? dgdt[static_cast<size_t>(a)] : 0.0;
        };
        for (int l = 0; l < dim; ++l)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                    G(l, i, j) = 0.5 / gd[static_cast<size_t>(l)] *
                                 (dg(i, j, l) + dg(j, i, l) - dg(l, i, j));
        return gamma;
    };

    const std::vector<double> gam = christoffel(k);
    const std::vector<double> gam_p = christoffel(k + 1);
    const std::vector<double> gam_m = christoffel(k - 1);
    auto G = [&](const std::vector<double>& v, int l, int i, int j) {
        return v[static_cast<size_t>((l * dim + i) * dim + j)];
    };
    auto dG = [&](int l, int i, int j) {
        return (G(gam_p, l, i, j) - G(gam_m, l, i, j)) / (2.0 * dt);
    };

    // Ric_ij = d_m Gamma^m_ij - d_i Gamma^m_mj + Gamma^m_ml Gamma^l_ij
    //          - Gamma^m_il Gamma^l_mj, with d_m nonzero only for m = t.
    std::vector<double> ric(static_cast<size_t>(dim * dim), 0.0);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double r = dG(0, i, j);
            if (i == 0) {
                for (int m = 0; m < dim; ++m) r -= dG(m, m, j);
            }
            for (int m = 0; m < dim; ++m)
                for (int l = 0; l < dim; ++l)
                    r += G(gam, m, m, l) * G(gam, l, i, j) -
                         G(gam, m, i, l) * G(gam, l, m, j);
            ric[static_cast<size_t>(i * dim + j)] = r;
        }
    }

    OracleCurvature out;
    out.t = g.point(k);
    out.ricci_diag.resize(static_cast<size_t>(dim));
    const std::vector<double> gd = metric_diag(k);
    double sc = 0.0;
    for (int a = 0; a < dim; ++a) {
        const double raa =
            ric[static_cast<size_t>(a * dim + a)] / gd[static_cast<size_t>(a)];
        out.ricci_diag[static_cast<size_t>(a)] = raa;
        sc += raa;
    }
    out.scalar = sc;
    return out;
}

/// CSV with columns t, ric_t, ric_fiber_i..., ric_min, scalar, H, A_sq, A0_sq.
inline void write_curvature_csv(std::ostream& os, const Band& band,
                                const CurvatureProfile& c) {
    os << "t,ric_t";
    for (size_t i = 0; i < c.ric_fiber.size(); ++i) os << ",ric_fiber_" << i;
    os << ",ric_min,scalar,H,A_sq,A0_sq\n";
    for (int i = 0; i < band.grid.n_points(); ++i) {
        os << format_17g(band.grid.point(i)) << ',' << format_17g(c.ric_t[i]);
        for (const GridFunction& f : c.ric_fiber) os << ',' << format_17g(f[i]);
        os << ',' << format_17g(c.ric_min[i]) << ',' << format_17g(c.scalar[i]) << ','
           << format_17g(c.mean_curv[i]) << ',' << format_17g(c.second_ff_sq[i]) << ','
           << format_17g(c.traceless_A_sq[i]) << '\n';
    }
}

}  // namespace muband
