#ifndef FRACLMS_SIM_HARNESS_HPP
#define FRACLMS_SIM_HARNESS_HPP

#include <fraclms/adaptive_filters.hpp>
#include <fraclms/learning_curve.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace fraclms {

enum class SignalKind { real_gaussian, circular_complex_gaussian };

/// Power the SNR is measured against. input_power uses the unit input
/// variance; output_power uses the noiseless system output power
/// ||w_true||^2 (white unit-power input).
enum class NoiseReference { input_power, output_power };

constexpr std::string_view to_string(SignalKind kind) noexcept {
    return kind == SignalKind::real_gaussian ? "real-gaussian" : "circular-complex-gaussian";
}

/// One system-identification scenario.
struct SystemSpec {
    std::vector<cdouble> w_true;
    SignalKind signal_kind{SignalKind::real_gaussian};
    std::optional<double> snr_db;
    std::size_t samples{1000};
    NoiseReference noise_reference{NoiseReference::input_power};

    [[nodiscard]] std::size_t taps() const noexcept { return w_true.size(); }

    void validate() const {
        if (w_true.empty()) {
            throw std::invalid_argument("system needs at least one tap");
        }
        if (samples < taps()) {
            throw std::invalid_argument("samples (" + std::to_string(samples) + ") must be at least taps (" +
                                        std::to_string(taps()) + ")");
        }
        if (snr_db && !std::isfinite(*snr_db)) {
            throw std::invalid_argument("snr_db must be finite");
        }
    }
};

// ---------------------------------------------------------------------------
// Random streams
//
// Every run owns independent generators. With derive_seed(a, i) =
// splitmix64(splitmix64(a) ^ i), run r of a protocol gets
// run_seed = derive_seed(master, r), and its streams are seeded with
// derive_seed(run_seed, stream) into std::mt19937_64. Gaussians come from
// std::normal_distribution. Stream 0 drives the input signal, stream 1 the
// measurement noise.
// ---------------------------------------------------------------------------

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ index);
}

inline constexpr std::uint64_t kInputStream = 0;
inline constexpr std::uint64_t kNoiseStream = 1;

/// Unit-power white Gaussian samples. The circular case splits the variance
/// equally between real and imaginary parts.
inline std::vector<cdouble> generate_input(SignalKind kind, std::size_t length, std::uint64_t seed) {
    if (length == 0) {
        throw std::invalid_argument("generate_input: length must be positive");
    }
    std::mt19937_64 rng(seed);
    std::vector<cdouble> out(length);
    if (kind == SignalKind::real_gaussian) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (auto& x : out) {
            x = {dist(rng), 0.0};
        }
    } else {
        std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
        for (auto& x : out) {
            const double re = dist(rng);
            const double im = dist(rng);
            x = {re, im};
        }
    }
    return out;
}

inline double noise_variance(const SystemSpec& spec) {
    if (!spec.snr_db) {
        return 0.0;
    }
    double signal_power = 1.0;
    if (spec.noise_reference == NoiseReference::output_power) {
        signal_power = 0.0;
        for (const auto& w : spec.w_true) {
            signal_power += std::norm(w);
        }
    }
    return signal_power / std::pow(10.0, *spec.snr_db / 10.0);
}

/// Tapped-delay-line regressor [x(k), x(k-1), ..., x(k-N+1)], zero before k = 0.
inline void fill_regressor(std::span<const cdouble> input, std::size_t k, std::span<cdouble> out) {
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = (n <= k) ? input[k - n] : cdouble{0.0, 0.0};
    }
}

/// d(k) = w_true^H y(k) + v(k), v white Gaussian (circular for complex input).
inline std::vector<cdouble> synthesize_desired(std::span<const cdouble> input, const SystemSpec& spec,
                                               std::uint64_t seed) {
    spec.validate();
    if (input.size() != spec.samples) {
        throw std::invalid_argument("synthesize_desired: input length must equal spec.samples");
    }
    const std::size_t taps = spec.taps();
    const double variance = noise_variance(spec);
    std::mt19937_64 rng(seed);
    const bool complex_noise = spec.signal_kind == SignalKind::circular_complex_gaussian;
    std::normal_distribution<double> dist(0.0, std::sqrt(complex_noise ? variance / 2.0 : variance));

    std::vector<cdouble> y(taps);
    std::vector<cdouble> d(spec.samples);
    for (std::size_t k = 0; k < spec.samples; ++k) {
        fill_regressor(input, k, y);
        cdouble acc{};
        for (std::size_t n = 0; n < taps; ++n) {
            acc += std::conj(spec.w_true[n]) * y[n];
        }
        if (variance > 0.0) {
            const double re = dist(rng);
            const double im = complex_noise ? dist(rng) : 0.0;
            acc += cdouble{re, im};
        }
        d[k] = acc;
    }
    return d;
}

/// ||w_true - w||_1 / N.
inline double mean_deviation(std::span<const cdouble> w_true, std::span<const cdouble> w) {
    double acc = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        acc += std::abs(w_true[n] - w[n]);
    }
    return acc / static_cast<double>(w.size());
}

inline constexpr double kDivergenceThreshold = 1e6;
inline constexpr double kNonrealTolerance = 1e-12;

struct RunResult {
    /// md_curve[k] is the mean deviation of w(k), the weights before the k-th update.
    std::vector<double> md_curve;
    bool diverged{false};
    std::optional<std::size_t> first_nonreal_iteration;
};

namespace detail {

inline void check_filter_against(const SystemSpec& spec, const FilterConfig& config) {
    config.validate();
    if (config.taps != spec.taps()) {
        throw std::invalid_argument("filter taps (" + std::to_string(config.taps) + ") differ from system taps (" +
                                    std::to_string(spec.taps()) + ")");
    }
}

}  // namespace detail

/// Runs every filter on one shared realisation of input and noise.
inline std::vector<RunResult> run_filters(const SystemSpec& spec, std::span<const FilterConfig> configs,
                                          std::uint64_t run_seed) {
    spec.validate();
    for (const auto& c : configs) {
        detail::check_filter_against(spec, c);
    }
    const std::vector<cdouble> input =
        generate_input(spec.signal_kind, spec.samples, derive_seed(run_seed, kInputStream));
    const std::vector<cdouble> desired = synthesize_desired(input, spec, derive_seed(run_seed, kNoiseStream));
    const bool track_leakage = spec.signal_kind == SignalKind::real_gaussian;

    std::vector<RunResult> results;
    results.reserve(configs.size());
    std::vector<cdouble> y(spec.taps());
    for (const auto& config : configs) {
        RunResult r;
        r.md_curve.resize(spec.samples);
        FilterState state = init(config);
        for (std::size_t k = 0; k < spec.samples; ++k) {
            double md = mean_deviation(spec.w_true, state.w);
            if (!std::isfinite(md)) {
                md = std::numeric_limits<double>::infinity();
            }
            if (md > kDivergenceThreshold) {
                r.diverged = true;
            }
            r.md_curve[k] = md;
            if (track_leakage && !r.first_nonreal_iteration) {
                const bool nonreal = std::any_of(state.w.begin(), state.w.end(), [](const cdouble& w) {
                    return !(std::abs(w.imag()) <= kNonrealTolerance);
                });
                if (nonreal) {
                    r.first_nonreal_iteration = k;
                }
            }
            fill_regressor(input, k, y);
            step(state, config, y, desired[k]);
        }
        results.push_back(std::move(r));
    }
    return results;
}

inline RunResult run_single(const SystemSpec& spec, const FilterConfig& config, std::uint64_t run_seed) {
    return std::move(run_filters(spec, std::span(&config, 1), run_seed).front());
}

/// A Monte Carlo experiment: one system, several filters, `runs` independent rounds.
struct ProtocolSpec {
    std::string name;
    SystemSpec system;
    std::vector<FilterConfig> filters;
    std::size_t runs{1000};
    std::uint64_t master_seed{1};

    void validate() const {
        system.validate();
        if (filters.empty()) {
            throw std::invalid_argument("protocol has no filters");
        }
        if (runs == 0) {
            throw std::invalid_argument("runs must be at least 1");
        }
        for (const auto& f : filters) {
            detail::check_filter_against(system, f);
        }
        for (std::size_t i = 0; i < filters.size(); ++i) {
            for (std::size_t j = i + 1; j < filters.size(); ++j) {
                if (label_of(filters[i]) == label_of(filters[j])) {
                    throw std::invalid_argument("duplicate filter label " + label_of(filters[i]).str());
                }
            }
        }
    }
};

using CurveMap = std::map<CurveLabel, LearningCurve>;

inline constexpr std::size_t kRunsPerBlock = 8;

/// Pointwise mean of the MD curves of every filter over all runs.
///
/// Run r uses seed derive_seed(master_seed, r). Runs are summed in fixed
/// blocks of kRunsPerBlock, and blocks in index order, so the result is
/// bit-identical for any thread count. threads == 0 means hardware concurrency.
inline CurveMap run_monte_carlo(const ProtocolSpec& protocol, unsigned threads = 0) {
    protocol.validate();
    const std::size_t n_filters = protocol.filters.size();
    const std::size_t samples = protocol.system.samples;
    const std::size_t n_blocks = (protocol.runs + kRunsPerBlock - 1) / kRunsPerBlock;

    struct Partial {
        std::vector<double> sum;
        std::size_t diverged{0};
        std::size_t nonreal{0};
        std::optional<std::size_t> first_nonreal;
    };
    std::vector<std::vector<Partial>> blocks(n_blocks);

    auto work_block = [&](std::size_t b) {
        std::vector<Partial> partial(n_filters, Partial{std::vector<double>(samples, 0.0)});
        const std::size_t end = std::min(protocol.runs, (b + 1) * kRunsPerBlock);
        for (std::size_t run = b * kRunsPerBlock; run < end; ++run) {
            const auto results = run_filters(protocol.system, protocol.filters, derive_seed(protocol.master_seed, run));
            for (std::size_t f = 0; f < n_filters; ++f) {
                auto& acc = partial[f];
                const auto& r = results[f];
                for (std::size_t k = 0; k < samples; ++k) {
                    acc.sum[k] += r.md_curve[k];
                }
                acc.diverged += r.diverged ? 1 : 0;
                if (r.first_nonreal_iteration) {
                    ++acc.nonreal;
                    acc.first_nonreal = std::min(acc.first_nonreal.value_or(samples), *r.first_nonreal_iteration);
                }
            }
        }
        blocks[b] = std::move(partial);
    };

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
    if (threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            work_block(b);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t b = next++; b < n_blocks && !failed; b = next++) {
                    try {
                        work_block(b);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        pool.clear();
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    CurveMap out;
    for (std::size_t f = 0; f < n_filters; ++f) {
        LearningCurve curve;
        curve.label = label_of(protocol.filters[f]);
        curve.runs = protocol.runs;
        curve.values.assign(samples, 0.0);
        for (const auto& block : blocks) {
            const auto& p = block[f];
            for (std::size_t k = 0; k < samples; ++k) {
                curve.values[k] += p.sum[k];
            }
            curve.diverged_runs += p.diverged;
            curve.nonreal_runs += p.nonreal;
            if (p.first_nonreal) {
                curve.first_nonreal_iteration = std::min(curve.first_nonreal_iteration.value_or(samples), *p.first_nonreal);
            }
        }
        const double inv = 1.0 / static_cast<double>(protocol.runs);
        for (auto& v : curve.values) {
            v = std::isfinite(v) ? v * inv : std::numeric_limits<double>::infinity();
        }
        out.emplace(curve.label, std::move(curve));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Replication presets
// ---------------------------------------------------------------------------

enum class Preset { fnlms_negative, fnlms_positive, fclms_negative };

inline constexpr std::array<Preset, 3> kAllPresets{Preset::fnlms_negative, Preset::fnlms_positive,
                                                   Preset::fclms_negative};

constexpr std::string_view to_string(Preset p) noexcept {
    switch (p) {
    case Preset::fnlms_negative: return "fnlms-negative";
    case Preset::fnlms_positive: return "fnlms-positive";
    case Preset::fclms_negative: return "fclms-negative";
    }
    return "?";
}

inline std::optional<Preset> parse_preset(std::string_view name) noexcept {
    for (Preset p : kAllPresets) {
        if (to_string(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

inline const std::vector<double>& default_nu_list() {
    static const std::vector<double> list{0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    return list;
}

/// [-10, -9, ..., 9, 10]
inline std::vector<cdouble> ramp_system() {
    std::vector<cdouble> w;
    for (int v = -10; v <= 10; ++v) {
        w.emplace_back(static_cast<double>(v), 0.0);
    }
    return w;
}

inline std::vector<cdouble> positive_system() {
    const double taps[] = {1, 2, 2, 2, 1, 1, 2, 2, 3, 1, 1, 2, 2, 2, 1,
                           2, 1, 2, 2, 2, 1, 1, 2, 2, 2, 1, 1, 3, 2, 2};
    return {std::begin(taps), std::end(taps)};
}

struct PresetOverrides {
    std::optional<std::size_t> runs;
    std::optional<std::size_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<double>> nu_list;
};

/// Baseline at nu = 1 followed by the fractional variant at every nu in the list.
inline ProtocolSpec make_preset(Preset preset, const PresetOverrides& overrides = {}) {
    ProtocolSpec p;
    p.name = std::string(to_string(preset));
    p.runs = overrides.runs.value_or(1000);
    p.master_seed = overrides.seed.value_or(1);
    p.system.samples = overrides.samples.value_or(1000);
    p.system.noise_reference = NoiseReference::input_power;

    Algorithm baseline = Algorithm::NLMS;
    Algorithm fractional = Algorithm::FNLMS;
    double baseline_mu = 1.0;
    double integral_mu = 0.5;
    double fractional_mu = 0.5;
    switch (preset) {
    case Preset::fnlms_negative:
        p.system.w_true = ramp_system();
        p.system.signal_kind = SignalKind::real_gaussian;
        p.system.snr_db = 10.0;
        break;
    case Preset::fnlms_positive:
        p.system.w_true = positive_system();
        p.system.signal_kind = SignalKind::real_gaussian;
        p.system.snr_db.reset();
        break;
    case Preset::fclms_negative:
        p.system.w_true = ramp_system();
        p.system.signal_kind = SignalKind::circular_complex_gaussian;
        p.system.snr_db = 10.0;
        baseline = Algorithm::CLMS;
        fractional = Algorithm::FCLMS;
        baseline_mu = 0.04;
        integral_mu = 0.02;
        fractional_mu = 0.02;
        break;
    }

    const std::size_t taps = p.system.taps();
    p.filters.push_back(FilterConfig{baseline, taps, baseline_mu, 0.0, FractionalOrder{1.0}, 1e-6});
    std::vector<double> nus = overrides.nu_list.value_or(default_nu_list());
    std::sort(nus.begin(), nus.end());
    nus.erase(std::unique(nus.begin(), nus.end()), nus.end());
    for (double nu : nus) {
        p.filters.push_back(FilterConfig{fractional, taps, integral_mu, fractional_mu, FractionalOrder{nu}, 1e-6});
    }
    return p;
}

}  // namespace fraclms

#endif  // FRACLMS_SIM_HARNESS_HPP
