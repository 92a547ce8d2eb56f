#include <fraclms/cli_runner.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace fraclms::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "fraclms");
    std::vector<char*> argv;
    for (auto& a : args) {
        argv.push_back(a.data());
    }
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("fraclms_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

TEST(ConfigParser, ParsesBlocksAndLists) {
    std::istringstream in(R"(# demo
name = demo
w_true = 1, -2, 0.5:0.25
taps = 3
signal = circular-complex-gaussian
snr_db = 15
snr_reference = output
samples = 300
runs = 7
seed = 9

algorithm = CLMS
mu1 = 0.01

algorithm = FCLMS
mu1 = 0.005
mu_frac = 0.005
nu = 0.6, 0.9   # two filters
epsilon = 1e-5
)");
    const auto cfg = parse_config(in, "fallback");
    const auto& p = cfg.protocol;
    EXPECT_EQ(p.name, "demo");
    ASSERT_EQ(p.system.w_true.size(), 3u);
    EXPECT_EQ(p.system.w_true[2], cdouble(0.5, 0.25));
    EXPECT_EQ(p.system.signal_kind, SignalKind::circular_complex_gaussian);
    EXPECT_EQ(*p.system.snr_db, 15.0);
    EXPECT_EQ(p.system.noise_reference, NoiseReference::output_power);
    EXPECT_EQ(p.system.samples, 300u);
    EXPECT_EQ(p.runs, 7u);
    EXPECT_EQ(p.master_seed, 9u);
    ASSERT_EQ(p.filters.size(), 3u);
    EXPECT_EQ(p.filters[0].algorithm, Algorithm::CLMS);
    EXPECT_EQ(p.filters[2].nu.value(), 0.9);
    EXPECT_EQ(p.filters[2].epsilon, 1e-5);
}

std::string config_error(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_config(in, "x");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

TEST(ConfigParser, ErrorsCarryLineNumbers) {
    EXPECT_EQ(config_error("w_true = 1\nalgorithm = FNLMS\nmu1 = 0.5\nmu_frac = 0\n"),
              "line 2: FNLMS requires mu_frac > 0");
    EXPECT_EQ(config_error("w_true = 1\nbogus = 3\n"), "line 2: unknown key 'bogus'");
    EXPECT_EQ(config_error("w_true = 1, x\n"), "line 1: invalid number 'x' for 'w_true'");
    EXPECT_EQ(config_error("mu1 = 1\n"), "line 1: 'mu1' must follow an 'algorithm' line");
    EXPECT_EQ(config_error("w_true = 1\nalgorithm = RLS\n"), "line 2: unknown algorithm 'RLS'");
    EXPECT_EQ(config_error("w_true = 1, 2\ntaps = 3\nalgorithm = NLMS\nmu1 = 1\n"),
              "line 2: taps = 3 but w_true has 2 entries");
    EXPECT_EQ(config_error("w_true = 1\nalgorithm = NLMS\n"), "line 2: filter block needs 'mu1'");
    EXPECT_EQ(config_error("w_true = 1\nalgorithm = NLMS\nmu1 = 1\nnu = 1.5\n"), "line 4: nu must lie in (0, 1]");
    EXPECT_EQ(config_error("algorithm = NLMS\nmu1 = 1\n"), "missing 'w_true'");
    EXPECT_EQ(config_error("w_true = 1\nsamples 5\n"), "line 2: expected 'key = value'");
}

TEST(CurvesCsv, HeaderAndNonFinite) {
    CurveMap curves;
    LearningCurve a;
    a.label = {Algorithm::FNLMS, 0.5};
    a.values = {1.5, std::numeric_limits<double>::infinity()};
    LearningCurve b;
    b.label = {Algorithm::NLMS, 1.0};
    b.values = {2.0, 0.25};
    curves.emplace(a.label, a);
    curves.emplace(b.label, b);
    std::ostringstream os;
    write_curves_csv(os, curves);
    EXPECT_EQ(os.str(), "iteration,NLMS_nu=1.0,FNLMS_nu=0.5\n0,2.0,1.5\n1,0.25,inf\n");
}

TEST(TableCsv, Layout) {
    SteadyStateReport report;
    report.entries = {{{Algorithm::CLMS, 1.0}, {-12.5}}, {{Algorithm::FCLMS, 0.4}, {}}, {{Algorithm::FCLMS, 1.0}, {-12.5}}};
    std::ostringstream os;
    write_table_csv(os, report);
    EXPECT_EQ(os.str(), "algorithm,nu=0.4,nu=1.0\nCLMS,,-12.5000\nFCLMS,diverged,-12.5000\n");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, kExitUsage);
    EXPECT_EQ(invoke({"replicate", "nonsense", "--out", scratch_dir("usage").string()}).code, kExitUsage);
    EXPECT_EQ(invoke({"gradcheck", "--trials", "0"}).code, kExitUsage);
    EXPECT_EQ(invoke({"gradcheck", "--nu", "1.5"}).code, kExitUsage);
    EXPECT_EQ(invoke({"run"}).code, kExitUsage);
    EXPECT_EQ(invoke({"run", "/nonexistent/config.cfg"}).code, kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Cli, UnwritableOutputDirectory) {
    const fs::path dir = scratch_dir("unwritable");
    const fs::path blocker = dir / "file";
    std::ofstream(blocker) << "x";
    const auto r = invoke({"replicate", "fnlms-positive", "--runs", "1", "--out", (blocker / "sub").string()});
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("output directory"), std::string::npos);
}

TEST(Cli, GradcheckDefaultPasses) {
    const auto r = invoke({"gradcheck", "--trials", "300"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
    EXPECT_NE(r.out.find("quadratic-fit oracle"), std::string::npos);
}

TEST(Cli, GradcheckEndpoint) {
    const auto r = invoke({"gradcheck", "--trials", "300", "--nu", "0.999999"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
    EXPECT_NE(r.out.find("endpoint nu = 0.999999"), std::string::npos);
    EXPECT_NE(r.out.find("classical gradient (informational)"), std::string::npos);
}

TEST(Cli, ReplicateFnlmsPositiveSmoke) {
    const fs::path dir = scratch_dir("positive");
    const auto r = invoke({"replicate", "fnlms-positive", "--runs", "10", "--out", dir.string(), "--threads", "2"});
    // Overflowed runs make both comparison windows infinite for the lowest
    // orders, so the strict tail-vs-checkpoint check reports a tolerance failure.
    EXPECT_EQ(r.code, kExitTolerance) << r.out << r.err;
    EXPECT_NE(r.out.find("[PASS] FNLMS nu=1 equals NLMS"), std::string::npos) << r.out;
    ASSERT_TRUE(fs::exists(dir / "fnlms-positive_curves.csv"));
    ASSERT_TRUE(fs::exists(dir / "fnlms-positive_table.csv"));
    ASSERT_TRUE(fs::exists(dir / "fnlms-positive_table.json"));
    EXPECT_EQ(first_line(dir / "fnlms-positive_curves.csv"),
              "iteration,NLMS_nu=1.0,FNLMS_nu=0.4,FNLMS_nu=0.5,FNLMS_nu=0.6,FNLMS_nu=0.7,FNLMS_nu=0.8,FNLMS_nu=0.9,"
              "FNLMS_nu=1.0");

    const auto j = nlohmann::json::parse(slurp(dir / "fnlms-positive_table.json"));
    for (const auto& e : j["entries"]) {
        if (e["algorithm"] == "FNLMS" && e["nu"].get<double>() < 1.0) {
            EXPECT_TRUE(e["trend"] == "diverging" || e["trend"] == "failed-nonreal") << e.dump();
            EXPECT_TRUE(e["diverged"].get<bool>()) << e.dump();
            EXPECT_TRUE(e["steady_state_db"].is_null()) << e.dump();
            EXPECT_GE(e["diverged_runs"].get<int>(), 1) << e.dump();
        }
    }
}

TEST(Cli, ReplicateFormatSelection) {
    const fs::path dir = scratch_dir("format");
    const auto r = invoke({"replicate", "fclms-negative", "--runs", "2", "--samples", "300", "--nu", "0.9,1.0",
                           "--format", "json", "--out", dir.string()});
    EXPECT_NE(r.code, kExitUsage) << r.err;
    EXPECT_TRUE(fs::exists(dir / "fclms-negative_table.json"));
    EXPECT_FALSE(fs::exists(dir / "fclms-negative_table.csv"));
    EXPECT_EQ(first_line(dir / "fclms-negative_curves.csv"), "iteration,CLMS_nu=1.0,FCLMS_nu=0.9,FCLMS_nu=1.0");
}

TEST(Cli, ReplicateAllIsByteReproducible) {
    const fs::path a = scratch_dir("repro_a");
    const fs::path b = scratch_dir("repro_b");
    ASSERT_NE(invoke({"replicate", "all", "--seed", "7", "--runs", "9", "--samples", "250", "--out", a.string(),
                      "--threads", "1"})
                  .code,
              kExitUsage);
    ASSERT_NE(invoke({"replicate", "all", "--seed", "7", "--runs", "9", "--samples", "250", "--out", b.string(),
                      "--threads", "3"})
                  .code,
              kExitUsage);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
        ++files;
        EXPECT_EQ(slurp(entry.path()), slurp(b / entry.path().filename())) << entry.path();
    }
    EXPECT_EQ(files, 9u);
}

TEST(Cli, RunCustomConfig) {
    const fs::path dir = scratch_dir("run");
    const fs::path cfg = dir / "custom.cfg";
    std::ofstream(cfg) << "w_true = 0.5, -1, 2\nsamples = 300\nruns = 4\nalgorithm = NLMS\nmu1 = 0.5\n";
    const auto r = invoke({"run", cfg.string(), "--out", dir.string()});
    EXPECT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(first_line(dir / "custom_curves.csv"), "iteration,NLMS_nu=1.0");
    EXPECT_EQ(first_line(dir / "custom_table.csv"), "algorithm,nu=1.0");
}

TEST(Cli, RunValidationErrors) {
    const fs::path dir = scratch_dir("run_bad");
    const fs::path frac = dir / "frac.cfg";
    std::ofstream(frac) << "w_true = 1, 2\nalgorithm = FNLMS\nmu1 = 0.5\nmu_frac = 0\nnu = 0.5\n";
    const auto r1 = invoke({"run", frac.string(), "--out", dir.string()});
    EXPECT_EQ(r1.code, kExitUsage);
    EXPECT_NE(r1.err.find("line 2"), std::string::npos);

    const fs::path short_cfg = dir / "short.cfg";
    std::ofstream(short_cfg) << "w_true = 1, 2, 3, 4\nsamples = 3\nalgorithm = NLMS\nmu1 = 1\n";
    const auto r2 = invoke({"run", short_cfg.string(), "--out", dir.string()});
    EXPECT_EQ(r2.code, kExitUsage);
    EXPECT_NE(r2.err.find("samples"), std::string::npos);
}

}  // namespace
}  // namespace fraclms::cli
