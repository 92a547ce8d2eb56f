#ifndef FRACLMS_REPLICATION_HPP
#define FRACLMS_REPLICATION_HPP

#include <fraclms/metrics_analysis.hpp>
#include <fraclms/sim_harness.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fraclms {

struct Check {
    std::string name;
    bool passed{false};
    std::string detail;
};

/// Reference FCLMS steady-state errors in dB; nullopt marks divergence.
struct TableTarget {
    double nu;
    std::optional<double> db;
};

inline constexpr std::array<TableTarget, 7> kFclmsTable{{
    {0.4, std::nullopt},
    {0.5, std::nullopt},
    {0.6, -10.15},
    {0.7, -11.25},
    {0.8, -11.91},
    {0.9, -12.38},
    {1.0, -12.77},
}};

inline constexpr double kTableToleranceDb = 2.0;

namespace detail {

inline std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

inline const LearningCurve* find_curve(const CurveMap& curves, Algorithm alg, double nu) {
    auto it = curves.find(CurveLabel{alg, nu});
    return it == curves.end() ? nullptr : &it->second;
}

inline std::string db_text(const SteadyState& s) { return s.db ? fmt("%.2f dB", *s.db) : std::string("diverged"); }

inline std::vector<Check> fclms_checks(const CurveMap& curves, const WindowSpec& w) {
    std::vector<Check> checks;
    const LearningCurve* clms = find_curve(curves, Algorithm::CLMS, 1.0);
    const SteadyState clms_ss = clms ? steady_state_db(*clms, w) : SteadyState{};

    for (const auto& target : kFclmsTable) {
        const LearningCurve* c = find_curve(curves, Algorithm::FCLMS, target.nu);
        if (!c) {
            continue;
        }
        const SteadyState ss = steady_state_db(*c, w);
        Check chk;
        chk.name = "FCLMS nu=" + format_decimal(target.nu) + " matches table";
        if (!target.db) {
            chk.passed = ss.diverged();
            chk.detail = "expected diverged, got " + db_text(ss);
        } else {
            chk.passed = ss.db && std::abs(*ss.db - *target.db) <= kTableToleranceDb;
            chk.detail = "target " + fmt("%.2f dB", *target.db) + " +/- 2 dB, got " + db_text(ss);
        }
        checks.push_back(std::move(chk));
    }

    // Strict improvement with nu over the converging part of the table.
    std::vector<std::pair<double, SteadyState>> converged;
    for (const auto& target : kFclmsTable) {
        if (!target.db) {
            continue;
        }
        if (const LearningCurve* c = find_curve(curves, Algorithm::FCLMS, target.nu)) {
            converged.emplace_back(target.nu, steady_state_db(*c, w));
        }
    }
    if (converged.size() >= 2) {
        bool ordered = true;
        for (std::size_t i = 1; i < converged.size(); ++i) {
            const auto& lo = converged[i - 1].second;
            const auto& hi = converged[i].second;
            ordered = ordered && lo.db && hi.db && *hi.db < *lo.db;
        }
        checks.push_back({"FCLMS steady state improves with nu", ordered, "over nu in [0.6, 1.0]"});
    }

    if (clms) {
        bool worse = true;
        std::string detail = "CLMS " + db_text(clms_ss);
        for (const auto& [label, curve] : curves) {
            if (label.algorithm != Algorithm::FCLMS || label.nu >= 1.0) {
                continue;
            }
            const SteadyState ss = steady_state_db(curve, w);
            worse = worse && clms_ss.db && (ss.diverged() || *ss.db > *clms_ss.db);
        }
        checks.push_back({"FCLMS nu<1 worse than CLMS", worse, detail});
    }
    return checks;
}

inline std::vector<Check> fnlms_negative_checks(const CurveMap& curves, const WindowSpec& w) {
    std::vector<Check> checks;
    for (const auto& [label, curve] : curves) {
        const double initial = curve.values.front();
        const double tail = final_window_mean(curve, w);
        if (label.algorithm == Algorithm::FNLMS && label.nu < 1.0) {
            const Trend trend = classify_divergence(curve, w);
            const bool ok = curve.complex_leakage() && trend != Trend::converging && tail > 0.5 * initial;
            checks.push_back({"FNLMS nu=" + format_decimal(label.nu) + " fails on negative weights", ok,
                              std::string(to_string(trend)) + ", final MD " + fmt("%.4g vs initial %.4g", tail, initial)});
        } else if (label.algorithm == Algorithm::NLMS) {
            checks.push_back({"NLMS converges", tail < 0.2 * initial,
                              fmt("final MD %.4g vs initial %.4g", tail, initial)});
        }
    }
    return checks;
}

inline std::vector<Check> fnlms_positive_checks(const CurveMap& curves, const WindowSpec& w) {
    std::vector<Check> checks;
    const LearningCurve* nlms = find_curve(curves, Algorithm::NLMS, 1.0);
    for (const auto& [label, curve] : curves) {
        if (label.algorithm != Algorithm::FNLMS) {
            continue;
        }
        if (label.nu < 1.0) {
            const double tail = final_window_mean(curve, w);
            const double early = checkpoint_window_mean(curve, w);
            checks.push_back({"FNLMS nu=" + format_decimal(label.nu) + " diverges on positive weights", tail > early,
                              fmt("final MD %.4g vs checkpoint %.4g", tail, early)});
        } else if (nlms) {
            double worst = 0.0;
            for (std::size_t k = 0; k < curve.values.size(); ++k) {
                const double a = curve.values[k];
                const double b = nlms->values[k];
                const double diff = (a == b) ? 0.0 : std::abs(a - b);
                worst = std::isnan(diff) ? std::numeric_limits<double>::infinity() : std::max(worst, diff);
            }
            checks.push_back({"FNLMS nu=1 equals NLMS", worst <= 1e-12, fmt("max |diff| %.3g", worst)});
        }
    }
    return checks;
}

}  // namespace detail

/// Replication checks for a preset's Monte Carlo curves.
inline std::vector<Check> replication_checks(Preset preset, const CurveMap& curves, const WindowSpec& w = {}) {
    switch (preset) {
    case Preset::fclms_negative: return detail::fclms_checks(curves, w);
    case Preset::fnlms_negative: return detail::fnlms_negative_checks(curves, w);
    case Preset::fnlms_positive: return detail::fnlms_positive_checks(curves, w);
    }
    return {};
}

}  // namespace fraclms

#endif  // FRACLMS_REPLICATION_HPP
