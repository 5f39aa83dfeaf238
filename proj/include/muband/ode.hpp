#pragma once

// Closed-form solutions of the prescribed-mean-curvature ODE families
//
//   (1 - gamma/4) h^2 + h' + Lambda = 0          (Ricci-spectral)
//   c_n(gamma)   h^2 + h' + Lambda = 0           (scalar-spectral)
//   h^2 + h' + 4 kappa = 0                       (pointwise Ricci)
//
// together with the positive weights u they generate and the perturbed
// profiles eta_eps used in the existence scans.

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "muband/grid.hpp"

namespace muband {

inline constexpr double kPi = 3.14159265358979323846;

enum class BoundKind { RicciSpectral, ScalarSpectral, RicciPointwise };

inline const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::RicciSpectral: return "RicciSpectral";
        case BoundKind::ScalarSpectral: return "ScalarSpectral";
        case BoundKind::RicciPointwise: return "RicciPointwise";
    }
    return "unknown";
}

/// c_n(gamma) = (-n*gamma + gamma + 2n) / (4(n-1) + 2*gamma*(2-n)).
inline double scalar_coefficient(int n, double gamma) {
    return (-n * gamma + gamma + 2.0 * n) / (4.0 * (n - 1) + 2.0 * gamma * (2 - n));
}

struct SpectralParams {
    BoundKind kind = BoundKind::RicciSpectral;
    double gamma = 1.0;
    double lambda = 1.0;
    int n = 3;
    int kappa = 0;

    static SpectralParams ricci(double gamma, double lambda) {
        SpectralParams p{BoundKind::RicciSpectral, gamma, lambda, 3, 0};
        p.validate();
        return p;
    }
    static SpectralParams scalar(double gamma, double lambda, int n) {
        SpectralParams p{BoundKind::ScalarSpectral, gamma, lambda, n, 0};
        p.validate();
        return p;
    }
    static SpectralParams pointwise_ricci(int kappa, int n = 3) {
        SpectralParams p{BoundKind::RicciPointwise, 0.0, 0.0, n, kappa};
        p.validate();
        return p;
    }

    void validate() const {
        switch (kind) {
            case BoundKind::RicciSpectral:
                if (n != 3)
                    throw ConstraintError("ricci-spectral parameters require n = 3");
                if (!(gamma > 0.0 && gamma < 4.0))
                    throw ConstraintError("ricci-spectral parameters require 0 < gamma < 4");
                if (!(lambda > 0.0))
                    throw ConstraintError("ricci-spectral parameters require lambda > 0");
                break;
            case BoundKind::ScalarSpectral: {
                if (n < 3 || n > 7)
                    throw ConstraintError("scalar-spectral parameters require 3 <= n <= 7");
                if (!(gamma > 0.0 && gamma < 2.0 * n / (n - 1)))
                    throw ConstraintError(
                        "scalar-spectral parameters require 0 < gamma < 2n/(n-1)");
                if (!(lambda > 0.0))
                    throw ConstraintError("scalar-spectral parameters require lambda > 0");
                if (!(scalar_coefficient(n, gamma) > 0.0))
                    throw ConstraintError("scalar coefficient c_n(gamma) must be positive");
                break;
            }
            case BoundKind::RicciPointwise:
                if (kappa < -1 || kappa > 1)
                    throw ConstraintError("pointwise-ricci parameters require kappa in {-1,0,1}");
                if (n != 3)
                    throw ConstraintError("pointwise-ricci parameters require n = 3");
                break;
        }
    }

    /// Coefficient of h^2 in the defining ODE.
    double ode_coefficient() const {
        switch (kind) {
            case BoundKind::RicciSpectral: return 1.0 - 0.25 * gamma;
            case BoundKind::ScalarSpectral: return scalar_coefficient(n, gamma);
            case BoundKind::RicciPointwise: return 1.0;
        }
        return 0.0;
    }

    /// Constant term of the defining ODE.
    double lambda_effective() const {
        return kind == BoundKind::RicciPointwise ? 4.0 * kappa : lambda;
    }

    /// mu = sqrt(coeff * Lambda) in h(t) = -sqrt(Lambda/coeff) tan(mu t).
    double tan_rate() const {
        if (kind == BoundKind::RicciPointwise)
            throw DomainError("tan_rate: undefined for the pointwise-ricci family");
        return std::sqrt(ode_coefficient() * lambda);
    }

    /// Half-width of the maximal band (distance from the center to the pole
    /// of h).
    double half_width() const { return 0.5 * kPi / tan_rate(); }
};

/// Prescribing-function profile: closed form, analytic derivative, and the
/// open interval on which it is finite.
struct HProfile {
    SpectralParams params;
    double shift = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::function<double(double)> value_fn;
    std::function<double(double)> deriv_fn;

    double operator()(double t) const {
        require_inside(t);
        return value_fn(t);
    }
    double derivative(double t) const {
        require_inside(t);
        return deriv_fn(t);
    }
    /// coeff * h^2 + h' + Lambda at t.
    double ode_residual(double t) const {
        const double h = (*this)(t);
        return params.ode_coefficient() * h * h + derivative(t) +
               params.lambda_effective();
    }
    bool contains(double t) const { return t > t_lo && t < t_hi; }

private:
    void require_inside(double t) const {
        if (!contains(t))
            throw DomainError("h profile: t outside (" + std::to_string(t_lo) + ", " +
                              std::to_string(t_hi) + ")");
    }
};

/// h(t) = -sqrt(Lambda/coeff) tan(mu (t + shift)) for the two spectral kinds,
/// or the cot/coth/1/t profile for kappa in {1,-1,0}.
inline HProfile h_profile(const SpectralParams& params, double shift = 0.0) {
    params.validate();
    HProfile p;
    p.params = params;
    p.shift = shift;

    if (params.kind == BoundKind::RicciPointwise) {
        const int kappa = params.kappa;
        p.t_lo = 0.0;
        p.t_hi = kappa == 1 ? 0.5 * kPi : std::numeric_limits<double>::infinity();
        if (kappa == 1) {
            p.value_fn = [](double t) { return 2.0 / std::tan(2.0 * t); };
            p.deriv_fn = [](double t) {
                const double s = std::sin(2.0 * t);
                return -4.0 / (s * s);
            };
        } else if (kappa == 0) {
            p.value_fn = [](double t) { return 1.0 / t; };
            p.deriv_fn = [](double t) { return -1.0 / (t * t); };
        } else {
            p.value_fn = [](double t) { return 2.0 / std::tanh(2.0 * t); };
            p.deriv_fn = [](double t) {
                const double s = std::sinh(2.0 * t);
                return -4.0 / (s * s);
            };
        }
        return p;
    }

    const double mu = params.tan_rate();
    const double amp = std::sqrt(params.lambda / params.ode_coefficient());
    const double hw = params.half_width();
    p.t_lo = -hw - shift;
    p.t_hi = hw - shift;
    p.value_fn = [amp, mu, shift](double t) { return -amp * std::tan(mu * (t + shift)); };
    p.deriv_fn = [amp, mu, shift](double t) {
        const double c = std::cos(mu * (t + shift));
        return -amp * mu / (c * c);
    };
    return p;
}

inline double h_ricci(const SpectralParams& params, double t) {
    if (params.kind != BoundKind::RicciSpectral)
        throw InputError("h_ricci: parameters are not ricci-spectral");
    return h_profile(params)(t);
}

inline double h_scalar(const SpectralParams& params, double t, double shift = 0.0) {
    if (params.kind != BoundKind::ScalarSpectral)
        throw InputError("h_scalar: parameters are not scalar-spectral");
    return h_profile(params, shift)(t);
}

inline double h_kappa(int kappa, double t) {
    return h_profile(SpectralParams::pointwise_ricci(kappa))(t);
}

/// Proportionality constant in (log u)' = ratio * h.
inline double w_slope_ratio(const SpectralParams& params) {
    switch (params.kind) {
        case BoundKind::RicciSpectral: return 0.5;
        case BoundKind::ScalarSpectral:
            return 1.0 / (params.gamma * (2 - params.n) + 2.0 * (params.n - 1));
        case BoundKind::RicciPointwise: return 0.0;
    }
    return 0.0;
}

/// Cosine exponent of the positive weight u (u = cos(mu t)^r, u(0) = 1).
inline double u_exponent(const SpectralParams& params) {
    switch (params.kind) {
        case BoundKind::RicciSpectral: return 1.0 / (2.0 * (1.0 - 0.25 * params.gamma));
        case BoundKind::ScalarSpectral:
            return 2.0 / (-params.n * params.gamma + params.gamma + 2.0 * params.n);
        case BoundKind::RicciPointwise:
            throw DomainError("u_profile: undefined for the pointwise-ricci family");
    }
    return 0.0;
}

/// Positive weight u with u(0) = 1 and (log u)' = w_slope_ratio * h.
inline double u_profile(const SpectralParams& params, double t) {
    const double hw = params.half_width();
    if (!(t > -hw && t < hw))
        throw DomainError("u_profile: t outside the open maximal band");
    return std::pow(std::cos(params.tan_rate() * t), u_exponent(params));
}

/// (log u)'(t).
inline double u_log_slope(const SpectralParams& params, double t) {
    return w_slope_ratio(params) * h_profile(params)(t);
}

/// Odd bump displacing the profile argument: alpha > 0 on (0, ell],
/// alpha' > 0 on [0, ell/2), alpha' < 0 on (ell/2, ell].
struct AlphaSpec {
    double ell = 1.0;
    std::function<double(double)> alpha;
    std::function<double(double)> alpha_prime;

    static AlphaSpec standard(double ell) {
        if (!(ell > 0.0)) throw InputError("alpha spec: ell must be positive");
        AlphaSpec a;
        a.ell = ell;
        // integral of (ell/2 - s) exp(-(2s/ell)^2) from 0 to |t|, extended oddly
        a.alpha = [ell](double t) {
            const double x = std::abs(t);
            const double val = ell * ell / 8.0 *
                               (std::sqrt(kPi) * std::erf(2.0 * x / ell) -
                                (1.0 - std::exp(-4.0 * x * x / (ell * ell))));
            return t >= 0 ? val : -val;
        };
        a.alpha_prime = [ell](double t) {
            const double x = std::abs(t);
            return (0.5 * ell - x) * std::exp(-4.0 * x * x / (ell * ell));
        };
        return a;
    }
};

namespace detail {

inline void validate_alpha(const AlphaSpec& a, int samples = 2001) {
    const double ell = a.ell;
    const double tiny = 1e-12 * ell;
    for (int i = 1; i <= samples; ++i) {
        const double t = ell * i / samples;
        if (!(a.alpha(t) > 0.0))
            throw InputError("alpha spec: alpha must be positive on (0, ell]");
        if (t < 0.5 * ell - tiny) {
            if (!(a.alpha_prime(t) > 0.0))
                throw InputError("alpha spec: alpha' must be positive on [0, ell/2)");
        } else if (t > 0.5 * ell + tiny) {
            if (!(a.alpha_prime(t) < 0.0))
                throw InputError("alpha spec: alpha' must be negative on (ell/2, ell]");
        }
    }
    if (!(a.alpha_prime(0.0) > 0.0))
        throw InputError("alpha spec: alpha'(0) must be positive");
}

template <class F>
double rk4_solve(F&& rhs, double t0, double y0, double t1, double step) {
    double t = t0, y = y0;
    const int dir = t1 >= t0 ? 1 : -1;
    step = std::abs(step) * dir;
    while ((t1 - t) * dir > 1e-15) {
        double h = step;
        if ((t + h - t1) * dir > 0) h = t1 - t;
        const double k1 = rhs(t, y);
        const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = rhs(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return y;
}

}  // namespace detail

/// Truncation point T_eps of the perturbed profile: the positive root of
/// t + eps*alpha(t) = half_width, found by bisection.
inline double perturbation_truncation(const SpectralParams& params, double epsilon,
                                      const AlphaSpec& a) {
    const double ell = params.half_width();
    if (epsilon == 0.0) return ell;
    auto g = [&](double t) { return t + epsilon * a.alpha(t) - ell; };
    double lo = 0.0, hi = ell;
    if (!(g(hi) >= 0.0))
        throw InputError("perturbation: alpha(ell) must be nonnegative");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * ell; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// eta_eps(t) = eta(t + eps*alpha(t)) on its truncated interval
/// (-T_eps, T_eps). Its ODE residual equals eps * alpha'(t) * eta'(t+eps*alpha).
inline HProfile perturbed_profile(const SpectralParams& params, double epsilon,
                                  const AlphaSpec& alpha_spec,
                                  double epsilon_max = 1e-2) {
    params.validate();
    if (params.kind == BoundKind::RicciPointwise)
        throw InputError("perturbed_profile: spectral families only");
    if (!(epsilon >= 0.0 && epsilon <= epsilon_max))
        throw InputError("perturbed_profile: epsilon outside [0, epsilon_max]");
    detail::validate_alpha(alpha_spec);

    const double t_eps = perturbation_truncation(params, epsilon, alpha_spec);
    HProfile base = h_profile(params);
    HProfile p;
    p.params = params;
    p.shift = 0.0;
    p.t_lo = -t_eps;
    p.t_hi = t_eps;
    auto alpha = alpha_spec.alpha;
    auto alpha_prime = alpha_spec.alpha_prime;
    p.value_fn = [base, alpha, epsilon](double t) {
        return base(t + epsilon * alpha(t));
    };
    p.deriv_fn = [base, alpha, alpha_prime, epsilon](double t) {
        const double z = t + epsilon * alpha(t);
        return base.derivative(z) * (1.0 + epsilon * alpha_prime(t));
    };
    return p;
}

/// CSV rows `t,h,residual` for a profile sampled on [a, b].
inline void write_profile_csv(std::ostream& os, const HProfile& p, double a, double b,
                              int samples = kDefaultGridPoints) {
    os << "t,h,residual\n";
    for (int i = 0; i < samples; ++i) {
        const double t = a + (b - a) * i / (samples - 1);
        os << format_17g(t) << ',' << format_17g(p(t)) << ','
           << format_17g(p.ode_residual(t)) << '\n';
    }
}

}  // namespace muband
