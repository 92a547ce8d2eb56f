#ifndef FRACLMS_FRACTIONAL_CALCULUS_HPP
#define FRACLMS_FRACTIONAL_CALCULUS_HPP

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fraclms {

using cdouble = std::complex<double>;

/// Order of a Riemann-Liouville derivative, restricted to (0, 1].
/// nu == 1 is the classical-gradient endpoint.
class FractionalOrder {
public:
    explicit FractionalOrder(double nu) : nu_(nu) {
        if (!(nu > 0.0 && nu <= 1.0)) {
            throw std::domain_error("fractional order must lie in (0, 1], got " + std::to_string(nu));
        }
    }

    [[nodiscard]] double value() const noexcept { return nu_; }
    [[nodiscard]] bool is_classical() const noexcept { return nu_ == 1.0; }

    friend bool operator==(FractionalOrder, FractionalOrder) = default;
    friend auto operator<=>(FractionalOrder, FractionalOrder) = default;

private:
    double nu_;
};

inline double gamma(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("gamma: argument must be positive");
    }
    return std::tgamma(x);
}

/// 1/Gamma(x) for x >= 0, with the limit 1/Gamma(0) = 0.
inline double reciprocal_gamma(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    return 1.0 / gamma(x);
}

/// Riemann-Liouville derivative of order nu of t^z evaluated at t:
/// Gamma(z+1)/Gamma(z-nu+1) * t^(z-nu).
inline double rl_power_derivative(double z, FractionalOrder nu, double t) {
    if (!(t > 0.0)) {
        throw std::domain_error("rl_power_derivative: t must be positive");
    }
    if (z < 0.0) {
        throw std::domain_error("rl_power_derivative: exponent z must be non-negative");
    }
    const double shifted = z - nu.value() + 1.0;
    return gamma(z + 1.0) * reciprocal_gamma(shifted) * std::pow(t, z - nu.value());
}

/// Principal-branch power exp(a * (ln|b| + i Arg b)), Arg in (-pi, pi].
/// 0^a = 0 for a > 0 and 0^0 = 1.
inline cdouble principal_power(cdouble base, double exponent) {
    if (base == cdouble{0.0, 0.0}) {
        if (exponent > 0.0) {
            return {0.0, 0.0};
        }
        if (exponent == 0.0) {
            return {1.0, 0.0};
        }
        throw std::domain_error("principal_power: zero base with negative exponent");
    }
    if (exponent == 0.0) {
        return {1.0, 0.0};
    }
    if (exponent == 1.0) {
        return base;
    }
    const double re = base.real();
    const double im = base.imag();
    // A signed zero imaginary part must not select the -pi side of the cut.
    const double arg = (im == 0.0) ? (re < 0.0 ? std::numbers::pi : 0.0) : std::atan2(im, re);
    const double mag = std::pow(std::abs(base), exponent);
    if (arg == 0.0) {
        return {mag, 0.0};
    }
    const double phase = exponent * arg;
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

/// Grunwald-Letnikov approximation of the left fractional derivative of
/// order nu of f at t, lower terminal 0, step h = t/steps.
template <std::invocable<double> F>
double gl_fractional_derivative_oracle(F&& f, FractionalOrder nu, double t, std::size_t steps) {
    if (!(t > 0.0)) {
        throw std::domain_error("gl_fractional_derivative_oracle: t must be positive");
    }
    if (steps < 100) {
        throw std::invalid_argument("gl_fractional_derivative_oracle: need at least 100 steps");
    }
    const double h = t / static_cast<double>(steps);
    double weight = 1.0;  // (-1)^j binom(nu, j)
    double acc = 0.0;
    for (std::size_t j = 0; j <= steps; ++j) {
        if (j > 0) {
            weight *= 1.0 - (nu.value() + 1.0) / static_cast<double>(j);
        }
        const double s = t - static_cast<double>(j) * h;
        acc += weight * static_cast<double>(f(s < 0.0 ? 0.0 : s));
    }
    return acc * std::pow(h, -nu.value());
}

}  // namespace fraclms

#endif  // FRACLMS_FRACTIONAL_CALCULUS_HPP
