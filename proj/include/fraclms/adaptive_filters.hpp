#ifndef FRACLMS_ADAPTIVE_FILTERS_HPP
#define FRACLMS_ADAPTIVE_FILTERS_HPP

#include <fraclms/fractional_calculus.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fraclms {

enum class Algorithm { LMS, NLMS, CLMS, FCLMS, FNLMS };

inline constexpr std::array<Algorithm, 5> kAllAlgorithms{Algorithm::LMS, Algorithm::NLMS, Algorithm::CLMS,
                                                         Algorithm::FCLMS, Algorithm::FNLMS};

constexpr std::string_view to_string(Algorithm alg) noexcept {
    switch (alg) {
    case Algorithm::LMS: return "LMS";
    case Algorithm::NLMS: return "NLMS";
    case Algorithm::CLMS: return "CLMS";
    case Algorithm::FCLMS: return "FCLMS";
    case Algorithm::FNLMS: return "FNLMS";
    }
    return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (Algorithm alg : kAllAlgorithms) {
        if (to_string(alg) == name) {
            return alg;
        }
    }
    return std::nullopt;
}

constexpr bool is_fractional(Algorithm alg) noexcept {
    return alg == Algorithm::FCLMS || alg == Algorithm::FNLMS;
}

constexpr bool is_normalized(Algorithm alg) noexcept {
    return alg == Algorithm::NLMS || alg == Algorithm::FNLMS;
}

/// Step sizes and order for one filter.
///
/// mu1 is the integral step (mu for LMS/CLMS, eta for FCLMS, mu_l / beta for
/// the normalized pair); mu_frac is the fractional step (eta_f, gamma) and is
/// ignored by the non-fractional algorithms.
struct FilterConfig {
    Algorithm algorithm{Algorithm::LMS};
    std::size_t taps{1};
    double mu1{0.01};
    double mu_frac{0.0};
    FractionalOrder nu{1.0};
    double epsilon{1e-6};

    void validate() const {
        if (taps == 0) {
            throw std::invalid_argument("filter needs at least one tap");
        }
        if (!(mu1 > 0.0) || !std::isfinite(mu1)) {
            throw std::invalid_argument("mu1 must be positive and finite");
        }
        if (!(mu_frac >= 0.0) || !std::isfinite(mu_frac)) {
            throw std::invalid_argument("mu_frac must be non-negative and finite");
        }
        if (is_fractional(algorithm) && mu_frac == 0.0) {
            throw std::invalid_argument(std::string(to_string(algorithm)) + " requires mu_frac > 0");
        }
        if (!(epsilon > 0.0)) {
            throw std::invalid_argument("epsilon must be positive");
        }
    }
};

struct FilterState {
    std::vector<cdouble> w;
    std::size_t k{0};
};

inline FilterState init(const FilterConfig& config) {
    config.validate();
    return FilterState{std::vector<cdouble>(config.taps, cdouble{0.0, 0.0}), 0};
}

/// Advances the filter by one sample and returns the a-priori error
/// e = d - w^H y.
///
/// LMS/CLMS use conj(e), the normalized pair uses e unconjugated. The
/// fractional algorithms add mu_frac * Gamma(2) * (y .* w^(1-nu)) / Gamma(2-nu)
/// times the same error factor (and normalization). w^(1-nu) is taken on the
/// principal branch, so negative weights push the state off the real line.
inline cdouble step(FilterState& state, const FilterConfig& config, std::span<const cdouble> y, cdouble d) {
    const std::size_t taps = state.w.size();
    if (y.size() != taps || taps != config.taps) {
        throw std::invalid_argument("step: regressor length does not match filter taps");
    }
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
        throw std::invalid_argument("step: non-finite desired sample");
    }
    double energy = 0.0;
    cdouble estimate{};
    for (std::size_t n = 0; n < taps; ++n) {
        if (!std::isfinite(y[n].real()) || !std::isfinite(y[n].imag())) {
            throw std::invalid_argument("step: non-finite regressor sample");
        }
        energy += std::norm(y[n]);
        estimate += std::conj(state.w[n]) * y[n];
    }
    const cdouble e = d - estimate;

    const Algorithm alg = config.algorithm;
    const cdouble err = is_normalized(alg) ? e : std::conj(e);
    const double norm = is_normalized(alg) ? energy + config.epsilon : 1.0;

    if (!is_fractional(alg)) {
        for (std::size_t n = 0; n < taps; ++n) {
            state.w[n] += config.mu1 * err * y[n] / norm;
        }
    } else {
        const double order = 1.0 - config.nu.value();
        const double g = gamma(2.0);
        const double denom = gamma(2.0 - config.nu.value());
        for (std::size_t n = 0; n < taps; ++n) {
            const cdouble frac = principal_power(state.w[n], order);
            const cdouble integral = config.mu1 * err * y[n] / norm;
            const cdouble fractional = config.mu_frac * g * (err * y[n] * frac / denom) / norm;
            state.w[n] += integral + fractional;
        }
    }
    ++state.k;
    return e;
}

}  // namespace fraclms

#endif  // FRACLMS_ADAPTIVE_FILTERS_HPP
