#ifndef FRACLMS_CORRELATION_OBJECTIVES_HPP
#define FRACLMS_CORRELATION_OBJECTIVES_HPP

#include <fraclms/fractional_calculus.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fraclms {

/// Dense square complex matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    cdouble& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    const cdouble& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

    [[nodiscard]] bool is_hermitian(double tol = 0.0) const {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

private:
    std::size_t n_{0};
    std::vector<cdouble> data_;
};

/// J(w) data: desired power sigma2, cross-correlation p and autocorrelation R.
struct QuadraticObjective {
    double sigma2{0.0};
    std::vector<cdouble> p;
    SquareMatrix R;

    [[nodiscard]] std::size_t dimension() const noexcept { return p.size(); }
};

namespace detail {

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
    }
}

inline void require_consistent(const QuadraticObjective& obj, const char* what) {
    require_same_size(obj.p.size(), obj.R.size(), what);
}

// w^H p
inline cdouble inner(std::span<const cdouble> w, std::span<const cdouble> p) {
    cdouble acc{};
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += std::conj(w[i]) * p[i];
    }
    return acc;
}

// w^H R w
inline cdouble quadratic_form(std::span<const cdouble> w, const SquareMatrix& R) {
    cdouble acc{};
    for (std::size_t i = 0; i < w.size(); ++i) {
        cdouble row{};
        for (std::size_t j = 0; j < w.size(); ++j) {
            row += R(i, j) * w[j];
        }
        acc += std::conj(w[i]) * row;
    }
    return acc;
}

}  // namespace detail

/// Single-sample correlation estimates: p[n] = y[n] conj(d), R[n][m] = y[n] conj(y[m]),
/// sigma2 = |d|^2. The conjugates vanish on real data; on complex data they make
/// objective_correct reproduce |d - w^H y|^2.
inline QuadraticObjective instantaneous_correlations(std::span<const cdouble> y, cdouble d) {
    if (y.empty()) {
        throw std::invalid_argument("instantaneous_correlations: empty regressor");
    }
    QuadraticObjective obj;
    obj.sigma2 = std::norm(d);
    obj.p.resize(y.size());
    obj.R = SquareMatrix(y.size());
    for (std::size_t n = 0; n < y.size(); ++n) {
        obj.p[n] = y[n] * std::conj(d);
        for (std::size_t m = 0; m < y.size(); ++m) {
            obj.R(n, m) = y[n] * std::conj(y[m]);
        }
    }
    return obj;
}

/// sigma2 - 2 w^H p + w^H R w, kept complex.
inline cdouble objective_flawed(std::span<const cdouble> w, const QuadraticObjective& obj) {
    detail::require_consistent(obj, "objective_flawed");
    detail::require_same_size(w.size(), obj.dimension(), "objective_flawed");
    return obj.sigma2 - 2.0 * detail::inner(w, obj.p) + detail::quadratic_form(w, obj.R);
}

/// sigma2 - 2 Re{w^H p} + Re{w^H R w}.
inline double objective_correct(std::span<const cdouble> w, const QuadraticObjective& obj) {
    detail::require_consistent(obj, "objective_correct");
    detail::require_same_size(w.size(), obj.dimension(), "objective_correct");
    return obj.sigma2 - 2.0 * detail::inner(w, obj.p).real() + detail::quadratic_form(w, obj.R).real();
}

/// Chain-rule shortcut used by the fractional filters:
/// -Gamma(2) y[n] conj(e) w[n]^(1-nu) / Gamma(2-nu), componentwise.
inline std::vector<cdouble> frac_gradient_uncorrected(std::span<const cdouble> w, std::span<const cdouble> y,
                                                      cdouble e, FractionalOrder nu) {
    detail::require_same_size(w.size(), y.size(), "frac_gradient_uncorrected");
    const double scale = -gamma(2.0) / gamma(2.0 - nu.value());
    std::vector<cdouble> grad(w.size());
    for (std::size_t n = 0; n < w.size(); ++n) {
        grad[n] = scale * y[n] * std::conj(e) * principal_power(w[n], 1.0 - nu.value());
    }
    return grad;
}

/// Raised when the Riemann-Liouville gradient is requested at a non-positive weight.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline std::vector<double> require_real_point(std::span<const double> w, const QuadraticObjective& obj,
                                              std::size_t index, const char* what) {
    require_consistent(obj, what);
    require_same_size(w.size(), obj.dimension(), what);
    if (index >= w.size()) {
        throw std::out_of_range(std::string(what) + ": coordinate index out of range");
    }
    for (std::size_t n = 0; n < obj.dimension(); ++n) {
        if (obj.p[n].imag() != 0.0) {
            throw std::invalid_argument(std::string(what) + ": cross-correlation must be real");
        }
        for (std::size_t m = 0; m < obj.dimension(); ++m) {
            if (obj.R(n, m).imag() != 0.0) {
                throw std::invalid_argument(std::string(what) + ": autocorrelation must be real");
            }
        }
    }
    if (!(w[index] > 0.0)) {
        throw SingularityError(std::string(what) + ": weight must be positive at the differentiated coordinate");
    }
    return {w.begin(), w.end()};
}

}  // namespace detail

/// Riemann-Liouville fractional partial derivative of the real objective with
/// respect to w[index] (zero-based), lower terminal 0.
///
/// J is split into the part constant in w_l, the linear part
/// 2 w_l (sum_{n != l} w_n R_nl - p_l) and the quadratic part w_l^2 R_ll; each
/// is differentiated with the power rule. Requires real p, R (R symmetric)
/// and w[index] > 0.
inline double frac_gradient_corrected(std::span<const double> w, const QuadraticObjective& obj,
                                      FractionalOrder nu, std::size_t index) {
    detail::require_real_point(w, obj, index, "frac_gradient_corrected");
    const std::size_t n_taps = w.size();
    const double v = nu.value();
    const double wl = w[index];

    double constant = obj.sigma2;
    double linear = -obj.p[index].real();
    for (std::size_t n = 0; n < n_taps; ++n) {
        if (n == index) {
            continue;
        }
        constant -= 2.0 * w[n] * obj.p[n].real();
        linear += w[n] * obj.R(n, index).real();
        for (std::size_t m = 0; m < n_taps; ++m) {
            if (m != index) {
                constant += w[n] * w[m] * obj.R(n, m).real();
            }
        }
    }

    return constant * std::pow(wl, -v) * reciprocal_gamma(1.0 - v) +
           2.0 * linear * std::pow(wl, 1.0 - v) / gamma(2.0 - v) +
           2.0 * obj.R(index, index).real() * std::pow(wl, 2.0 - v) / gamma(3.0 - v);
}

/// Classical partial derivative dJ/dw[index] = 2 (sum_n w_n R_n,index - p_index)
/// for real symmetric data; the nu -> 1 limit of frac_gradient_corrected.
inline double classical_gradient(std::span<const double> w, const QuadraticObjective& obj, std::size_t index) {
    detail::require_consistent(obj, "classical_gradient");
    detail::require_same_size(w.size(), obj.dimension(), "classical_gradient");
    double acc = -obj.p[index].real();
    for (std::size_t n = 0; n < w.size(); ++n) {
        acc += w[n] * obj.R(n, index).real();
    }
    return 2.0 * acc;
}

/// Brute-force check of frac_gradient_corrected: recovers J as a quadratic in
/// w[index] from three evaluations of objective_correct and applies the power
/// rule term by term.
inline double frac_gradient_oracle(std::span<const double> w, const QuadraticObjective& obj, FractionalOrder nu,
                                   std::size_t index) {
    std::vector<double> probe = detail::require_real_point(w, obj, index, "frac_gradient_oracle");

    auto objective_at = [&](double value) {
        probe[index] = value;
        std::vector<cdouble> wc(probe.begin(), probe.end());
        return objective_correct(wc, obj);
    };
    // Interpolation nodes -1, 0, 1.
    const double j_minus = objective_at(-1.0);
    const double j_zero = objective_at(0.0);
    const double j_plus = objective_at(1.0);
    const double c0 = j_zero;
    const double c1 = 0.5 * (j_plus - j_minus);
    const double c2 = 0.5 * (j_plus + j_minus) - j_zero;

    const double wl = w[index];
    auto term = [&](double coefficient, double power) {
        if (coefficient == 0.0) {
            return 0.0;
        }
        return coefficient * rl_power_derivative(power, nu, wl);
    };
    return term(c0, 0.0) + term(c1, 1.0) + term(c2, 2.0);
}

}  // namespace fraclms

#endif  // FRACLMS_CORRELATION_OBJECTIVES_HPP
