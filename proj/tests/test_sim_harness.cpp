#include <fraclms/sim_harness.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

namespace fraclms {
namespace {

using cvec = std::vector<cdouble>;

TEST(GenerateInput, UnitPowerAndCircularity) {
    for (SignalKind kind : {SignalKind::real_gaussian, SignalKind::circular_complex_gaussian}) {
        const auto x = generate_input(kind, 1'000'000, 42);
        double power = 0.0;
        cdouble second{};
        for (const auto& v : x) {
            power += std::norm(v);
            second += v * v;
        }
        power /= static_cast<double>(x.size());
        second /= static_cast<double>(x.size());
        EXPECT_GE(power, 0.99);
        EXPECT_LE(power, 1.01);
        if (kind == SignalKind::circular_complex_gaussian) {
            EXPECT_LT(std::abs(second), 0.01);
        } else {
            for (std::size_t i = 0; i < 1000; ++i) {
                ASSERT_EQ(x[i].imag(), 0.0);
            }
        }
    }
}

TEST(GenerateInput, SeedDeterminism) {
    EXPECT_EQ(generate_input(SignalKind::circular_complex_gaussian, 500, 9),
              generate_input(SignalKind::circular_complex_gaussian, 500, 9));
    EXPECT_NE(generate_input(SignalKind::real_gaussian, 500, 9), generate_input(SignalKind::real_gaussian, 500, 10));
    EXPECT_THROW(generate_input(SignalKind::real_gaussian, 0, 1), std::invalid_argument);
}

TEST(DeriveSeed, DistinctAcrossRunsAndStreams) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
    EXPECT_NE(derive_seed(derive_seed(1, 0), kInputStream), derive_seed(derive_seed(1, 0), kNoiseStream));
    static_assert(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST(Regressor, MatchesDirectIndexing) {
    cvec input(40);
    for (std::size_t i = 0; i < input.size(); ++i) {
        input[i] = {static_cast<double>(i + 1), -static_cast<double>(i)};
    }
    const std::size_t taps = 7;
    cvec y(taps);
    for (std::size_t k = 0; k < input.size(); ++k) {
        fill_regressor(input, k, y);
        for (std::size_t n = 0; n < taps; ++n) {
            const long idx = static_cast<long>(k) - static_cast<long>(n);
            const cdouble expected = idx >= 0 ? input[static_cast<std::size_t>(idx)] : cdouble{};
            ASSERT_EQ(y[n], expected) << "k=" << k << " n=" << n;
        }
    }
}

TEST(NoiseVariance, References) {
    SystemSpec spec;
    spec.w_true = ramp_system();
    spec.snr_db = 10.0;
    spec.noise_reference = NoiseReference::output_power;
    double sum_sq = 0.0;
    for (int v = -10; v <= 10; ++v) {
        sum_sq += v * v;
    }
    EXPECT_EQ(sum_sq, 770.0);
    EXPECT_NEAR(noise_variance(spec), 77.0, 1e-12);
    spec.noise_reference = NoiseReference::input_power;
    EXPECT_NEAR(noise_variance(spec), 0.1, 1e-15);
    spec.snr_db.reset();
    EXPECT_EQ(noise_variance(spec), 0.0);
}

TEST(SynthesizeDesired, NoiselessIsExactConvolution) {
    SystemSpec spec;
    spec.w_true = {cdouble{1.0, 0.5}, cdouble{-2.0, 0.0}, cdouble{0.25, -1.0}};
    spec.signal_kind = SignalKind::circular_complex_gaussian;
    spec.samples = 64;
    const auto x = generate_input(spec.signal_kind, spec.samples, 3);
    const auto d = synthesize_desired(x, spec, 4);
    for (std::size_t k = 0; k < spec.samples; ++k) {
        cdouble expected{};
        for (std::size_t n = 0; n < 3 && n <= k; ++n) {
            expected += std::conj(spec.w_true[n]) * x[k - n];
        }
        ASSERT_EQ(d[k], expected);
    }
}

TEST(SynthesizeDesired, ZeroSystemIsPureNoise) {
    SystemSpec spec;
    spec.w_true = cvec(4);
    spec.snr_db = 0.0;
    spec.samples = 100;
    const auto x = generate_input(spec.signal_kind, spec.samples, 3);
    const auto d1 = synthesize_desired(x, spec, 8);
    const auto x2 = generate_input(spec.signal_kind, spec.samples, 99);
    EXPECT_EQ(d1, synthesize_desired(x2, spec, 8));
}

TEST(SynthesizeDesired, EmpiricalSnrMatches) {
    for (SignalKind kind : {SignalKind::real_gaussian, SignalKind::circular_complex_gaussian}) {
        for (NoiseReference ref : {NoiseReference::input_power, NoiseReference::output_power}) {
            SystemSpec spec;
            spec.w_true = {0.5, -1.0, 2.0};
            spec.signal_kind = kind;
            spec.snr_db = 10.0;
            spec.noise_reference = ref;
            spec.samples = 1'000'000;
            const auto x = generate_input(kind, spec.samples, 1);
            SystemSpec clean = spec;
            clean.snr_db.reset();
            const auto d = synthesize_desired(x, spec, 2);
            const auto s = synthesize_desired(x, clean, 2);
            double noise_power = 0.0;
            double reference_power = 0.0;
            for (std::size_t k = 0; k < spec.samples; ++k) {
                noise_power += std::norm(d[k] - s[k]);
                reference_power += ref == NoiseReference::input_power ? std::norm(x[k]) : std::norm(s[k]);
            }
            const double snr = 10.0 * std::log10(reference_power / noise_power);
            EXPECT_NEAR(snr, 10.0, 0.1);
        }
    }
}

TEST(SynthesizeDesired, RejectsLengthMismatch) {
    SystemSpec spec;
    spec.w_true = {1.0};
    spec.samples = 10;
    EXPECT_THROW(synthesize_desired(cvec(9), spec, 1), std::invalid_argument);
}

TEST(SystemSpec, SamplesMustCoverTaps) {
    SystemSpec spec;
    spec.w_true = cvec(5, 1.0);
    spec.samples = 4;
    EXPECT_THROW(spec.validate(), std::invalid_argument);
    spec.samples = 5;
    EXPECT_NO_THROW(spec.validate());
}

TEST(MeanDeviation, IndependentDefinition) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        cvec a(9), b(9);
        double manual = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
            a[i] = {g(rng), g(rng)};
            b[i] = {g(rng), g(rng)};
            const double dr = a[i].real() - b[i].real();
            const double di = a[i].imag() - b[i].imag();
            manual += std::sqrt(dr * dr + di * di);
        }
        EXPECT_NEAR(mean_deviation(a, b), manual / 9.0, 1e-15);
    }
}

TEST(RunSingle, InitialDeviation) {
    SystemSpec spec;
    spec.w_true = ramp_system();
    spec.snr_db = 10.0;
    spec.samples = 50;
    const FilterConfig cfg{Algorithm::NLMS, 21, 1.0, 0.0, FractionalOrder{1.0}, 1e-6};
    const auto r = run_single(spec, cfg, 5);
    ASSERT_EQ(r.md_curve.size(), 50u);
    EXPECT_NEAR(r.md_curve[0], 110.0 / 21.0, 1e-15);
    EXPECT_NEAR(r.md_curve[0], 5.238095, 1e-6);
    EXPECT_FALSE(r.diverged);
    EXPECT_FALSE(r.first_nonreal_iteration);
}

TEST(RunSingle, NoiselessNlmsContracts) {
    SystemSpec spec;
    spec.w_true = positive_system();
    spec.samples = 1000;
    const FilterConfig cfg{Algorithm::NLMS, spec.taps(), 1.0, 0.0, FractionalOrder{1.0}, 1e-6};

    // The squared l2 deviation of a noiseless NLMS projection never grows.
    const auto x = generate_input(spec.signal_kind, spec.samples, derive_seed(3, kInputStream));
    const auto d = synthesize_desired(x, spec, derive_seed(3, kNoiseStream));
    auto state = init(cfg);
    cvec y(spec.taps());
    double previous = INFINITY;
    for (std::size_t k = 0; k < spec.samples; ++k) {
        double l2 = 0.0;
        for (std::size_t n = 0; n < spec.taps(); ++n) {
            l2 += std::norm(spec.w_true[n] - state.w[n]);
        }
        if (k >= spec.taps() - 1) {
            EXPECT_LE(l2, previous + 1e-9) << "k=" << k;
        }
        previous = l2;
        fill_regressor(x, k, y);
        step(state, cfg, y, d[k]);
    }

    const auto r = run_single(spec, cfg, 3);
    EXPECT_LT(r.md_curve.back(), 1e-6);
    EXPECT_FALSE(r.diverged);
}

TEST(RunSingle, FnlmsFlagsComplexLeakage) {
    SystemSpec spec;
    spec.w_true = ramp_system();
    spec.snr_db = 10.0;
    spec.samples = 100;
    const FilterConfig cfg{Algorithm::FNLMS, 21, 0.5, 0.5, FractionalOrder{0.5}, 1e-6};
    const auto r = run_single(spec, cfg, 1);
    ASSERT_TRUE(r.first_nonreal_iteration);
    EXPECT_GE(*r.first_nonreal_iteration, 2u);
}

TEST(RunSingle, RejectsTapMismatch) {
    SystemSpec spec;
    spec.w_true = cvec(3, 1.0);
    spec.samples = 10;
    const FilterConfig cfg{Algorithm::NLMS, 4, 1.0, 0.0, FractionalOrder{1.0}, 1e-6};
    EXPECT_THROW(run_single(spec, cfg, 1), std::invalid_argument);
}

ProtocolSpec small_protocol(std::size_t runs) {
    ProtocolSpec p = make_preset(Preset::fclms_negative, PresetOverrides{runs, 200, 11, std::vector<double>{0.5, 0.8, 1.0}});
    return p;
}

TEST(MonteCarlo, SingleRunEqualsRunSingle) {
    const ProtocolSpec p = small_protocol(1);
    const auto curves = run_monte_carlo(p, 1);
    for (const auto& f : p.filters) {
        const auto r = run_single(p.system, f, derive_seed(p.master_seed, 0));
        const auto& c = curves.at(label_of(f));
        ASSERT_EQ(c.values.size(), r.md_curve.size());
        for (std::size_t k = 0; k < r.md_curve.size(); ++k) {
            ASSERT_EQ(c.values[k], r.md_curve[k]);
        }
    }
}

TEST(MonteCarlo, ThreadCountDoesNotChangeBits) {
    const ProtocolSpec p = small_protocol(37);
    const auto serial = run_monte_carlo(p, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
        const auto parallel = run_monte_carlo(p, threads);
        ASSERT_EQ(serial.size(), parallel.size());
        for (const auto& [label, curve] : serial) {
            const auto& other = parallel.at(label);
            EXPECT_EQ(curve.values, other.values) << label.str();
            EXPECT_EQ(curve.diverged_runs, other.diverged_runs);
            EXPECT_EQ(curve.nonreal_runs, other.nonreal_runs);
        }
    }
}

TEST(MonteCarlo, FclmsAtOrderOneTracksClms) {
    const ProtocolSpec p = small_protocol(16);
    const auto curves = run_monte_carlo(p);
    const auto& clms = curves.at({Algorithm::CLMS, 1.0});
    const auto& fclms = curves.at({Algorithm::FCLMS, 1.0});
    for (std::size_t k = 0; k < clms.values.size(); ++k) {
        EXPECT_NEAR(clms.values[k], fclms.values[k], 1e-12);
    }
}

TEST(MonteCarlo, RejectsBadProtocols) {
    ProtocolSpec p = small_protocol(1);
    p.runs = 0;
    EXPECT_THROW(run_monte_carlo(p), std::invalid_argument);
    p = small_protocol(1);
    p.filters.push_back(p.filters.back());
    EXPECT_THROW(run_monte_carlo(p), std::invalid_argument);
}

TEST(Presets, Bindings) {
    const auto neg = make_preset(Preset::fnlms_negative);
    EXPECT_EQ(neg.system.taps(), 21u);
    EXPECT_EQ(neg.runs, 1000u);
    EXPECT_EQ(neg.system.samples, 1000u);
    EXPECT_EQ(*neg.system.snr_db, 10.0);
    ASSERT_EQ(neg.filters.size(), 8u);
    EXPECT_EQ(neg.filters[0].algorithm, Algorithm::NLMS);
    EXPECT_EQ(neg.filters[0].mu1, 1.0);
    EXPECT_EQ(neg.filters[1].algorithm, Algorithm::FNLMS);
    EXPECT_EQ(neg.filters[1].mu1, 0.5);
    EXPECT_EQ(neg.filters[1].mu_frac, 0.5);

    const auto pos = make_preset(Preset::fnlms_positive);
    EXPECT_EQ(pos.system.taps(), 30u);
    EXPECT_FALSE(pos.system.snr_db);
    double sum = 0.0;
    for (const auto& w : pos.system.w_true) {
        sum += w.real();
    }
    EXPECT_EQ(sum, 51.0);

    const auto fc = make_preset(Preset::fclms_negative);
    EXPECT_EQ(fc.system.signal_kind, SignalKind::circular_complex_gaussian);
    EXPECT_EQ(fc.filters[0].algorithm, Algorithm::CLMS);
    EXPECT_EQ(fc.filters[0].mu1, 0.04);
    EXPECT_EQ(fc.filters[3].mu1, 0.02);
    EXPECT_EQ(fc.filters[3].mu_frac, 0.02);

    EXPECT_EQ(parse_preset("fclms-negative"), Preset::fclms_negative);
    EXPECT_FALSE(parse_preset("nope"));
}

}  // namespace
}  // namespace fraclms
