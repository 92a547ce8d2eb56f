#ifndef FRACLMS_LEARNING_CURVE_HPP
#define FRACLMS_LEARNING_CURVE_HPP

#include <fraclms/adaptive_filters.hpp>

#include <charconv>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fraclms {

/// Shortest round-trip decimal for a double, always carrying a decimal point
/// ("1.0", "0.4", "-12.7291").
inline std::string format_decimal(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    std::string out(buf, end);
    if (out.find_first_of(".eEn") == std::string::npos) {
        out += ".0";
    }
    return out;
}

/// (algorithm, nu) identity of a learning curve; orders by algorithm then nu.
struct CurveLabel {
    Algorithm algorithm{Algorithm::LMS};
    double nu{1.0};

    [[nodiscard]] std::string str() const { return std::string(to_string(algorithm)) + "_nu=" + format_decimal(nu); }

    friend bool operator==(const CurveLabel&, const CurveLabel&) = default;
    friend std::partial_ordering operator<=>(const CurveLabel& a, const CurveLabel& b) {
        if (a.algorithm != b.algorithm) {
            return a.algorithm < b.algorithm ? std::partial_ordering::less : std::partial_ordering::greater;
        }
        return a.nu <=> b.nu;
    }
};

inline CurveLabel label_of(const FilterConfig& config) { return {config.algorithm, config.nu.value()}; }

/// Mean deviation per iteration, averaged over Monte Carlo runs. Non-finite
/// entries are stored as +inf.
struct LearningCurve {
    CurveLabel label;
    std::vector<double> values;
    std::size_t runs{0};
    std::size_t diverged_runs{0};
    /// Runs on real data whose weights acquired an imaginary part.
    std::size_t nonreal_runs{0};
    /// Earliest iteration at which any run's weights became non-real.
    std::optional<std::size_t> first_nonreal_iteration;

    [[nodiscard]] bool diverged() const noexcept { return diverged_runs > 0; }
    [[nodiscard]] bool complex_leakage() const noexcept { return nonreal_runs > 0; }
};

}  // namespace fraclms

#endif  // FRACLMS_LEARNING_CURVE_HPP
