#pragma once

// Constructors for the rigidity model metrics:
//
//   Ricci-spectral family   g = dt^2 + phi1^2 ds1^2 + phi2^2 ds2^2, n = 3,
//       phi_i = phi_i(0) cos(mu t)^e exp(+-beta * I(t)),
//       I(t) = integral_0^t cos(mu s)^(-P) ds,  P = (1-gamma/2)/(1-gamma/4),
//       subject to (1/2)(1-gamma/2) Lambda >= 2 beta^2.
//   scalar-spectral family  g = dt^2 + xi^2 g_T,  xi = cos(mu t)^q.
//   kappa family            doubly warped sin/cos, t, sinh/cosh powers.
//
// The per-factor cosine exponent e is derived from the product identity
// phi1*phi2 = phi1(0)phi2(0) cos^P together with phi1''/phi1 = phi2''/phi2,
// giving e = P/2 = (1-gamma/2)/(2-gamma/2). The alternative reading
// (1-gamma/2)/(2-gamma/8) is kept available so both candidates' residuals can
// be reported side by side.

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "muband/geometry.hpp"
#include "muband/grid.hpp"
#include "muband/ode.hpp"

namespace muband {

/// Fraction of the half-width trimmed at each pole when a model interval is
/// not given explicitly. Keeps finite differences of the warps accurate.
inline constexpr double kModelIntervalMargin = 0.25;

/// Much smaller trim used for principal-eigenvalue runs, which need the band
/// to reach (almost) all the way to the poles where u vanishes.
inline constexpr double kEigenIntervalMargin = 1e-4;

enum class ModelFamily { RicciSpectralModel, ScalarSpectralModel, KappaModel };

inline const char* to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::RicciSpectralModel: return "RicciSpectralModel";
        case ModelFamily::ScalarSpectralModel: return "ScalarSpectralModel";
        case ModelFamily::KappaModel: return "KappaModel";
    }
    return "unknown";
}

inline double ricci_warp_exponent(double gamma) {
    return (1.0 - 0.5 * gamma) / (2.0 - 0.5 * gamma);
}

/// Exponent as printed in the source being reproduced; inconsistent with the
/// product identity except at gamma in {0, 2}.
inline double ricci_warp_exponent_printed(double gamma) {
    return (1.0 - 0.5 * gamma) / (2.0 - gamma / 8.0);
}

inline double scalar_warp_exponent(int n, double gamma) {
    return 2.0 * (2.0 - gamma) / (-n * gamma + gamma + 2.0 * n);
}

struct ModelSpec {
    ModelFamily family = ModelFamily::RicciSpectralModel;
    SpectralParams params;
    double beta = 0.0;                  // phi1'(0)/phi1(0), Ricci family
    double c = 0.0;                     // kappa family shape parameter
    std::array<double, 2> phi0{1.0, 1.0};
    double t_minus = std::numeric_limits<double>::quiet_NaN();
    double t_plus = std::numeric_limits<double>::quiet_NaN();
    int n_points = kDefaultGridPoints;
    std::vector<double> fiber_lengths;  // defaults to unit circles

    bool has_interval() const {
        return std::isfinite(t_minus) && std::isfinite(t_plus);
    }

    /// The interval actually used: as configured, or the family default.
    std::array<double, 2> interval(double margin = kModelIntervalMargin) const {
        if (has_interval()) return {t_minus, t_plus};
        if (family == ModelFamily::KappaModel) {
            const double lo = 0.25;
            const double hi = params.kappa == 1 ? 0.5 * kPi - 0.25 : 1.25;
            return {lo, hi};
        }
        const double hw = params.half_width() * (1.0 - margin);
        return {-hw, hw};
    }

    void validate() const {
        params.validate();
        if (n_points < 5) throw InputError("model: n_points must be at least 5");
        if (!(phi0[0] > 0.0 && phi0[1] > 0.0))
            throw InputError("model: phi0 entries must be positive");
        const auto iv = interval();
        if (!(iv[0] < iv[1])) throw InputError("model: t_minus must be below t_plus");
        switch (family) {
            case ModelFamily::RicciSpectralModel: {
                if (params.kind != BoundKind::RicciSpectral)
                    throw InputError("model: ricci family needs ricci-spectral parameters");
                const double lhs = 0.5 * (1.0 - 0.5 * params.gamma) * params.lambda;
                if (lhs + 1e-12 < 2.0 * beta * beta)
                    throw ConstraintError(
                        "model: beta restriction violated, need "
                        "(1/2)(1 - gamma/2)*Lambda >= 2*(phi1'(0)/phi1(0))^2");
                check_inside_poles(iv);
                break;
            }
            case ModelFamily::ScalarSpectralModel:
                if (params.kind != BoundKind::ScalarSpectral)
                    throw InputError("model: scalar family needs scalar-spectral parameters");
                check_inside_poles(iv);
                break;
            case ModelFamily::KappaModel: {
                if (params.kind != BoundKind::RicciPointwise)
                    throw InputError("model: kappa family needs pointwise-ricci parameters");
                if (!(c >= 0.0 && c <= 1.0))
                    throw ConstraintError("model: kappa family requires 0 <= c <= 1");
                if (!(iv[0] > 0.0))
                    throw ConstraintError("model: kappa family requires t_minus > 0");
                if (params.kappa == 1 && !(iv[1] <= 0.5 * kPi + 1e-12))
                    throw ConstraintError("model: kappa = 1 requires the interval inside (0, pi/2)");
                break;
            }
        }
    }

    /// Largest beta allowed by the restriction, for the given (gamma, lambda).
    double beta_max() const {
        const double lhs = 0.5 * (1.0 - 0.5 * params.gamma) * params.lambda;
        return lhs <= 0.0 ? 0.0 : std::sqrt(0.5 * lhs);
    }

private:
    void check_inside_poles(const std::array<double, 2>& iv) const {
        const double hw = params.half_width();
        const double slack = 1e-12 * std::max(1.0, hw);
        if (iv[0] < -hw - slack || iv[1] > hw + slack)
            throw ConstraintError("model: interval reaches beyond the poles of h");
    }
};

namespace detail {

inline constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

template <class F>
double gauss5(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i)
        s += kGaussWeights[static_cast<size_t>(i)] *
             f(mid + half * kGaussNodes[static_cast<size_t>(i)]);
    return s * half;
}

/// Antiderivative anchored at 0, evaluated at every grid node.
template <class F>
std::vector<double> cumulative_from_zero(F&& f, const Grid& g) {
    const int n = g.n_points();
    std::vector<double> acc(static_cast<size_t>(n), 0.0);
    for (int i = 1; i < n; ++i)
        acc[static_cast<size_t>(i)] =
            acc[static_cast<size_t>(i - 1)] + gauss5(f, g.point(i - 1), g.point(i));
    double at_zero = 0.0;
    if (g.t_min() > 0.0)
        at_zero = -gauss5(f, 0.0, g.t_min());
    else if (g.t_max() < 0.0)
        at_zero = gauss5(f, g.t_max(), 0.0) + acc[static_cast<size_t>(n - 1)];
    else {
        const int j = g.nearest_index(0.0);
        at_zero = acc[static_cast<size_t>(j)] + gauss5(f, g.point(j), 0.0);
    }
    for (double& v : acc) v -= at_zero;
    return acc;
}

}  // namespace detail

/// Doubly warped Ricci-rigidity band, with a configurable per-factor cosine
/// exponent (the default is the product-identity-consistent one).
inline Band build_ricci_model_with_exponent(const ModelSpec& spec, double exponent) {
    spec.validate();
    if (spec.family != ModelFamily::RicciSpectralModel)
        throw InputError("build_ricci_model: spec is not a ricci model");
    const double gamma = spec.params.gamma;
    const double mu = spec.params.tan_rate();
    const double p_prod = (1.0 - 0.5 * gamma) / (1.0 - 0.25 * gamma);
    const auto iv = spec.interval();
    Grid grid(iv[0], iv[1], spec.n_points);

    auto integrand = [&](double s) { return std::pow(std::cos(mu * s), -p_prod); };
    const std::vector<double> ii = detail::cumulative_from_zero(integrand, grid);

    std::vector<double> v1(static_cast<size_t>(grid.n_points()));
    std::vector<double> v2(static_cast<size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_points(); ++i) {
        const double cs = std::cos(mu * grid.point(i));
        const double base = std::pow(cs, exponent);
        const size_t k = static_cast<size_t>(i);
        v1[k] = spec.phi0[0] * base * std::exp(spec.beta * ii[k]);
        v2[k] = spec.phi0[1] * base * std::exp(-spec.beta * ii[k]);
    }
    return Band(3, grid,
                DoublyWarped{GridFunction(grid, std::move(v1)),
                             GridFunction(grid, std::move(v2))},
                spec.fiber_lengths);
}

inline Band build_ricci_model(const ModelSpec& spec) {
    return build_ricci_model_with_exponent(spec, ricci_warp_exponent(spec.params.gamma));
}

inline Band build_scalar_model(const ModelSpec& spec) {
    spec.validate();
    if (spec.family != ModelFamily::ScalarSpectralModel)
        throw InputError("build_scalar_model: spec is not a scalar model");
    const double mu = spec.params.tan_rate();
    const double q = scalar_warp_exponent(spec.params.n, spec.params.gamma);
    const auto iv = spec.interval();
    Grid grid(iv[0], iv[1], spec.n_points);
    GridFunction xi = GridFunction::sample(
        grid, [&](double t) { return std::pow(std::cos(mu * t), q); });
    return Band(spec.params.n, grid, SingleWarp{std::move(xi)}, spec.fiber_lengths);
}

inline Band build_kappa_model(const ModelSpec& spec) {
    spec.validate();
    if (spec.family != ModelFamily::KappaModel)
        throw InputError("build_kappa_model: spec is not a kappa model");
    const double c = spec.c;
    const int kappa = spec.params.kappa;
    const auto iv = spec.interval();
    Grid grid(iv[0], iv[1], spec.n_points);
    const double e1 = 0.5 * (1.0 + c), e2 = 0.5 * (1.0 - c);

    auto sample_pair = [&](auto&& f, auto&& g) {
        std::vector<double> v1(static_cast<size_t>(grid.n_points()));
        std::vector<double> v2(static_cast<size_t>(grid.n_points()));
        for (int i = 0; i < grid.n_points(); ++i) {
            const double t = grid.point(i);
            const double a = f(t), b = g(t);
            v1[static_cast<size_t>(i)] = std::pow(a, e1) * std::pow(b, e2);
            v2[static_cast<size_t>(i)] = std::pow(a, e2) * std::pow(b, e1);
        }
        return Band(3, grid,
                    DoublyWarped{GridFunction(grid, std::move(v1)),
                                 GridFunction(grid, std::move(v2))},
                    spec.fiber_lengths);
    };
    if (kappa == 1)
        return sample_pair([](double t) { return std::sin(t); },
                           [](double t) { return std::cos(t); });
    if (kappa == -1)
        return sample_pair([](double t) { return std::sinh(t); },
                           [](double t) { return std::cosh(t); });
    return sample_pair([](double t) { return t; }, [](double) { return 1.0; });
}

inline Band build_model(const ModelSpec& spec) {
    switch (spec.family) {
        case ModelFamily::RicciSpectralModel: return build_ricci_model(spec);
        case ModelFamily::ScalarSpectralModel: return build_scalar_model(spec);
        case ModelFamily::KappaModel: return build_kappa_model(spec);
    }
    throw InputError("build_model: unknown family");
}

/// Residual of the product identity phi1*phi2 = phi1(0)phi2(0) cos(mu t)^P
/// for a given per-factor exponent, maximised over the grid (relative).
inline double product_identity_residual(const ModelSpec& spec, double exponent) {
    Band band = build_ricci_model_with_exponent(spec, exponent);
    const double gamma = spec.params.gamma;
    const double mu = spec.params.tan_rate();
    const double p_prod = (1.0 - 0.5 * gamma) / (1.0 - 0.25 * gamma);
    double worst = 0.0;
    for (int i = 0; i < band.grid.n_points(); ++i) {
        const double t = band.grid.point(i);
        const double expected =
            spec.phi0[0] * spec.phi0[1] * std::pow(std::cos(mu * t), p_prod);
        const double got = band.phi1()[i] * band.phi2()[i];
        worst = std::max(worst, std::abs(got - expected) / std::abs(expected));
    }
    return worst;
}

/// Side-by-side residuals for the two candidate per-factor exponents.
struct ExponentReport {
    double exponent_derived = 0.0;
    double exponent_printed = 0.0;
    double residual_derived = 0.0;
    double residual_printed = 0.0;
    std::string satisfying;
};

inline ExponentReport ricci_exponent_report(const ModelSpec& spec) {
    ExponentReport r;
    r.exponent_derived = ricci_warp_exponent(spec.params.gamma);
    r.exponent_printed = ricci_warp_exponent_printed(spec.params.gamma);
    r.residual_derived = product_identity_residual(spec, r.exponent_derived);
    r.residual_printed = product_identity_residual(spec, r.exponent_printed);
    r.satisfying = r.residual_derived <= r.residual_printed
                       ? "(1-gamma/2)/(2-gamma/2)"
                       : "(1-gamma/2)/(2-gamma/8)";
    return r;
}

}  // namespace muband
