#ifndef FRACLMS_METRICS_ANALYSIS_HPP
#define FRACLMS_METRICS_ANALYSIS_HPP

#include <fraclms/learning_curve.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fraclms {

/// Windows used to judge a learning curve. The checkpoint window is
/// [checkpoint - half_width, checkpoint + half_width), the final window the
/// last `final_window` iterations.
struct WindowSpec {
    std::size_t final_window{100};
    std::size_t checkpoint{100};
    std::size_t half_width{10};
};

/// Mean over [begin, end); +inf if any entry is non-finite.
inline double window_mean(std::span<const double> values, std::size_t begin, std::size_t end) {
    if (begin >= end || end > values.size()) {
        throw std::out_of_range("window_mean: empty or out-of-range window");
    }
    double acc = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        if (!std::isfinite(values[k])) {
            return std::numeric_limits<double>::infinity();
        }
        acc += values[k];
    }
    return acc / static_cast<double>(end - begin);
}

namespace detail {

inline void require_windows(const LearningCurve& curve, const WindowSpec& w) {
    if (curve.values.empty()) {
        throw std::invalid_argument("empty learning curve");
    }
    if (w.final_window == 0 || w.final_window > curve.values.size()) {
        throw std::invalid_argument("final window must be in [1, curve length]");
    }
    if (w.half_width == 0 || w.checkpoint < w.half_width || w.checkpoint + w.half_width > curve.values.size()) {
        throw std::invalid_argument("checkpoint window does not fit in the curve");
    }
}

}  // namespace detail

inline double final_window_mean(const LearningCurve& curve, const WindowSpec& w = {}) {
    detail::require_windows(curve, w);
    return window_mean(curve.values, curve.values.size() - w.final_window, curve.values.size());
}

inline double checkpoint_window_mean(const LearningCurve& curve, const WindowSpec& w = {}) {
    detail::require_windows(curve, w);
    return window_mean(curve.values, w.checkpoint - w.half_width, w.checkpoint + w.half_width);
}

/// Steady-state error in dB, or nothing when the curve diverged.
struct SteadyState {
    std::optional<double> db;

    [[nodiscard]] bool diverged() const noexcept { return !db.has_value(); }
};

/// 10 log10 of the final-window mean MD. Diverged when the final window holds
/// non-finite values or sits above the checkpoint window.
inline SteadyState steady_state_db(const LearningCurve& curve, const WindowSpec& w = {}) {
    const double tail = final_window_mean(curve, w);
    const double early = checkpoint_window_mean(curve, w);
    if (!std::isfinite(tail) || tail > early) {
        return {};
    }
    return {10.0 * std::log10(tail)};
}

enum class Trend { converging, diverging, failed_nonreal };

constexpr std::string_view to_string(Trend t) noexcept {
    switch (t) {
    case Trend::converging: return "converging";
    case Trend::diverging: return "diverging";
    case Trend::failed_nonreal: return "failed-nonreal";
    }
    return "?";
}

/// Complex leakage on real data dominates; otherwise a final window above the
/// checkpoint window (or non-finite) is diverging.
inline Trend classify_divergence(const LearningCurve& curve, const WindowSpec& w = {}) {
    if (curve.complex_leakage()) {
        return Trend::failed_nonreal;
    }
    const double tail = final_window_mean(curve, w);
    if (!std::isfinite(tail) || tail > checkpoint_window_mean(curve, w)) {
        return Trend::diverging;
    }
    return Trend::converging;
}

struct ReportEntry {
    CurveLabel label;
    SteadyState value;
};

/// Steady-state table: one entry per (algorithm, nu), ordered by algorithm
/// then nu ascending.
struct SteadyStateReport {
    std::vector<ReportEntry> entries;

    [[nodiscard]] const ReportEntry* find(const CurveLabel& label) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const ReportEntry& e) { return e.label == label; });
        return it == entries.end() ? nullptr : &*it;
    }

    /// Distinct nu values, ascending.
    [[nodiscard]] std::vector<double> nu_columns() const {
        std::vector<double> nus;
        for (const auto& e : entries) {
            nus.push_back(e.label.nu);
        }
        std::sort(nus.begin(), nus.end());
        nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
        return nus;
    }

    /// Distinct algorithms in table order.
    [[nodiscard]] std::vector<Algorithm> rows() const {
        std::vector<Algorithm> algs;
        for (const auto& e : entries) {
            if (algs.empty() || algs.back() != e.label.algorithm) {
                algs.push_back(e.label.algorithm);
            }
        }
        return algs;
    }
};

inline SteadyStateReport build_table(std::span<const LearningCurve> curves, const WindowSpec& w = {}) {
    if (curves.empty()) {
        throw std::invalid_argument("build_table: no curves");
    }
    SteadyStateReport report;
    report.entries.reserve(curves.size());
    for (const auto& c : curves) {
        report.entries.push_back({c.label, steady_state_db(c, w)});
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const ReportEntry& a, const ReportEntry& b) { return a.label < b.label; });
    for (std::size_t i = 1; i < report.entries.size(); ++i) {
        if (report.entries[i - 1].label == report.entries[i].label) {
            throw std::invalid_argument("build_table: duplicate curve " + report.entries[i].label.str());
        }
    }
    return report;
}

}  // namespace fraclms

#endif  // FRACLMS_METRICS_ANALYSIS_HPP
