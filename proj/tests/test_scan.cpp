#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "sqz/csvio.hpp"
#include "sqz/errors.hpp"
#include "sqz/estimation.hpp"
#include "sqz/scan.hpp"
#include "testutil.hpp"

using namespace sqz;
constexpr double kPi = std::numbers::pi;

namespace {

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() /
               (std::string("sqz-scan-") + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

MediumModel uniform_medium(double rotation, double absorption) {
    // one wide line; at detuning = width the dispersive factor is exactly 1
    return MediumModel({{0.0, 1.0, rotation, absorption, LineShape::gaussian}}, "test", 1, 0.0,
                       -6.0, 6.0);
}

ScanConfig quiet_config() {
    ScanConfig config;  // ideal chain, no excess, flat medium
    config.medium = uniform_medium(0.0, 0.0);
    config.chain = DetectionChain{1.0, 1.0, 0.0, 0};
    config.detunings = {0.5, 1.5, 3};
    config.rfs = {2.0, 6.0, 2};
    config.chi_points = 32;
    return config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SCANLAB_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

}  // namespace

TEST_CASE("per-point cell model and RF roll-off") {
    ScanConfig config = quiet_config();
    config.medium = uniform_medium(1.2, 0.0);
    CHECK(effective_gl(config, 1.0, 5.0) == doctest::Approx(1.2).epsilon(1e-12));

    config.rolloff_mhz = 5.0;
    CHECK(effective_gl(config, 1.0, 5.0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(effective_gl(config, 1.0, 10.0) == doctest::Approx(1.2 / 5.0).epsilon(1e-12));

    // the cell output uses the rolled-off shear
    const GaussianState state = cell_output_at(config, 1.0, 5.0);
    const GaussianState expect = shear(vacuum(), 0.6);
    CHECK(state.cov().xx == doctest::Approx(expect.cov().xx).epsilon(1e-12));
    CHECK(state.cov().xp == doctest::Approx(expect.cov().xp).epsilon(1e-12));
}

TEST_CASE("noise map: flat medium reads SQL everywhere") {
    ScanConfig config = quiet_config();
    config.chain.electronic_noise = 0.04;
    config.medium = uniform_medium(0.0, 0.4);  // absorbing but non-rotating
    const NoiseMap map = run_noise_map(config);
    REQUIRE(map.min_db.size() == 6);
    for (double db : map.min_db) {
        CHECK(db == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    for (double ex : map.excess_linear) {
        CHECK(ex == 0.0);
    }
    CHECK(map.detunings == std::vector<double>{0.5, 1.0, 1.5});
    CHECK(map.rfs == std::vector<double>{2.0, 6.0});
}

TEST_CASE("noise map: lossless single point hits the known squeezing level") {
    ScanConfig config;
    config.medium = uniform_medium(1.0, 0.0);
    config.chain = DetectionChain::from_efficiencies(0.96, 0.91, 0.0);
    config.detunings = {1.0, 1.0, 1};  // dispersive factor exactly 1
    config.rfs = {5.0, 5.0, 1};
    const NoiseMap map = run_noise_map(config);
    REQUIRE(map.min_db.size() == 1);
    CHECK(map.min_db_at(0, 0) == doctest::Approx(-3.3716).epsilon(1e-3));
}

TEST_CASE("noise map determinism") {
    ScanConfig config;
    config.chain.electronic_noise = 0.04;
    config.excess_peak = 0.6;
    config.detunings = {0.0, 3.0, 4};  // binary-exact grid values
    config.rfs = {1.0, 2.0, 2};
    config.chi_points = 48;
    config.mode = ScanMode::sampled;
    config.n_averages = 300;
    config.seed = 11;

    const NoiseMap serial = run_noise_map(config, Exec::serial);
    const NoiseMap parallel = run_noise_map(config, Exec::parallel);
    const NoiseMap again = run_noise_map(config, Exec::parallel);

    SUBCASE("thread count and reruns change nothing") {
        CHECK(serial.min_db == parallel.min_db);
        CHECK(serial.excess_linear == parallel.excess_linear);
        CHECK(parallel.min_db == again.min_db);
    }
    SUBCASE("a sub-grid reproduces the full grid bit for bit") {
        ScanConfig sub = config;
        sub.detunings = {1.0, 2.0, 2};  // rows 1 and 2 of the full grid
        sub.rfs = {2.0, 2.0, 1};        // column 1
        const NoiseMap small = run_noise_map(sub);
        CHECK(small.min_db_at(0, 0) == serial.min_db_at(1, 1));
        CHECK(small.min_db_at(1, 0) == serial.min_db_at(2, 1));
    }
    SUBCASE("a different seed changes the sampled values") {
        ScanConfig other = config;
        other.seed = 12;
        const NoiseMap shifted = run_noise_map(other);
        CHECK(shifted.min_db != serial.min_db);
    }
}

TEST_CASE("noise map: sampled estimates track the analytic minima") {
    ScanConfig config;
    config.chain.electronic_noise = 0.04;
    config.excess_peak = 0.6;
    config.detunings = {0.2, 1.0, 3};
    config.rfs = {4.0, 8.0, 2};
    config.chi_points = 128;
    config.seed = 21;

    const NoiseMap analytic = run_noise_map(config);
    config.mode = ScanMode::sampled;
    config.n_averages = 2000;
    const NoiseMap sampled = run_noise_map(config);

    const double sigma = std::sqrt(2.0 / config.n_averages);
    for (std::size_t k = 0; k < analytic.min_db.size(); ++k) {
        const double a = std::pow(10.0, analytic.min_db[k] / 10.0);
        const double s = std::pow(10.0, sampled.min_db[k] / 10.0);
        // grid-minimum selection biases the estimate low by O(sigma), never high
        CHECK(s - a < 5.0 * sigma * (a + 0.2));
        CHECK(a - s < 8.0 * sigma * (a + 0.2));
    }
}

TEST_CASE("phase trace") {
    SUBCASE("flat medium: both sections sit at the electronic-noise-loaded SQL") {
        ScanConfig config = quiet_config();
        config.chain.electronic_noise = 0.05;
        config.detunings = {1.0, 1.0, 1};
        config.rfs = {5.0, 5.0, 1};
        const PhaseTraces traces = run_phase_trace(config);
        REQUIRE(traces.signal.chis.size() == 32);
        for (std::size_t i = 0; i < traces.signal.chis.size(); ++i) {
            CHECK(traces.signal.analytic[i] == doctest::Approx(1.05).epsilon(1e-12));
            CHECK(traces.reference.analytic[i] == doctest::Approx(1.05).epsilon(1e-12));
        }
        CHECK(traces.signal.sql_reference == doctest::Approx(1.05).epsilon(1e-15));
        CHECK(traces.signal.detuning_ghz == 1.0);
        CHECK(traces.signal.rf_mhz == 5.0);
    }
    SUBCASE("analytic trace minimum agrees with the analytic map") {
        ScanConfig config;
        config.chain.electronic_noise = 0.04;
        config.excess_peak = 0.6;
        config.detunings = {0.35, 0.35, 1};
        config.rfs = {5.0, 5.0, 1};
        const PhaseTraces traces = run_phase_trace(config);
        const NoiseMap map = run_noise_map(config);
        const RefinedExtremum refined =
            refine_minimum(traces.signal.chis, traces.signal.analytic);
        const double db = to_db(refined.value - config.chain.electronic_noise);
        CHECK(db == doctest::Approx(map.min_db_at(0, 0)).scale(1.0).epsilon(1e-6));
    }
    SUBCASE("sampled trace minimum equals the sampled map cell exactly") {
        ScanConfig config;
        config.chain.electronic_noise = 0.04;
        config.excess_peak = 0.6;
        config.detunings = {0.25, 0.25, 1};
        config.rfs = {5.0, 5.0, 1};
        config.mode = ScanMode::sampled;
        config.n_averages = 400;
        config.seed = 5;
        const PhaseTraces traces = run_phase_trace(config);
        const NoiseMap map = run_noise_map(config);
        REQUIRE(traces.signal.has_sampled());
        const RefinedExtremum refined =
            refine_minimum(traces.signal.chis, traces.signal.sampled);
        const double db =
            to_db(std::max(refined.value - config.chain.electronic_noise, 1e-300));
        CHECK(db == map.min_db_at(0, 0));  // same streams, bitwise identical

        // the blocked-path reference scatters around its own SQL
        const double mean_ref =
            std::accumulate(traces.reference.sampled.begin(), traces.reference.sampled.end(),
                            0.0) /
            static_cast<double>(traces.reference.sampled.size());
        CHECK(mean_ref == doctest::Approx(1.04).epsilon(0.02));
    }
}

TEST_CASE("self-rotation scan") {
    ScanConfig config;
    config.detunings = {0.2, 1.2, 6};
    config.seed = 3;
    std::vector<double> epsilons;
    for (int i = 0; i < 13; ++i) {
        epsilons.push_back(-0.06 + 0.12 * i / 12.0);
    }

    SUBCASE("noiseless fits recover the medium exactly") {
        const auto rows = run_selfrotation_scan(config, epsilons, 2.0, 0.0, 1);
        REQUIRE(rows.size() == 6);
        for (const SelfRotationRow& row : rows) {
            CHECK(row.converged);
            CHECK(row.gl_true == doctest::Approx(gl_at(config.medium, row.detuning_ghz))
                                     .epsilon(1e-12));
            CHECK(row.gl_fitted == doctest::Approx(row.gl_true).scale(1.0).epsilon(1e-9));
            CHECK(row.alpha_l ==
                  doctest::Approx(alpha_at(config.medium, row.detuning_ghz)).epsilon(1e-12));
        }
    }
    SUBCASE("readout noise produces a nonzero reported uncertainty") {
        const auto rows = run_selfrotation_scan(config, epsilons, 2.0, 1e-3, 1);
        for (const SelfRotationRow& row : rows) {
            CHECK(row.converged);
            CHECK(row.gl_stderr > 0.0);
        }
    }
    SUBCASE("too few ellipticities are rejected") {
        const std::vector<double> three = {-0.01, 0.0, 0.01};
        CHECK_THROWS_AS(run_selfrotation_scan(config, three, 2.0, 0.0, 1), InvalidParameter);
    }
}

TEST_CASE("wigner construction") {
    SUBCASE("vacuum density is symmetric with unit mass") {
        const WignerGrid grid = make_wigner(0.0, 0.0, 5.0, 121);
        const std::size_t n = 121;
        const std::size_t c = n / 2;
        CHECK(grid.values[c * n + c] == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
        // x <-> p exchange and inversion are exact symmetries of the grid
        CHECK(grid.values[10 * n + 30] == doctest::Approx(grid.values[30 * n + 10])
                                              .epsilon(1e-12));
        CHECK(grid.values[10 * n + 30] ==
              doctest::Approx(grid.values[(n - 11) * n + (n - 31)]).epsilon(1e-12));

        const double dx = 10.0 / (n - 1);
        double mass = 0.0;
        for (double v : grid.values) {
            mass += v * dx * dx;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
    }
    SUBCASE("sheared state second moments match the covariance") {
        const std::size_t n = 301;
        const WignerGrid grid = make_wigner(1.0, 0.0, 6.5, n);
        const double dx = 13.0 / (n - 1);
        double mass = 0.0, mxx = 0.0, mxp = 0.0, mpp = 0.0;
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double x = -6.5 + dx * ix;
            for (std::size_t ip = 0; ip < n; ++ip) {
                const double p = -6.5 + dx * ip;
                const double w = grid.values[ix * n + ip] * dx * dx;
                mass += w;
                mxx += w * x * x;
                mxp += w * x * p;
                mpp += w * p * p;
            }
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(mxx == doctest::Approx(2.0).epsilon(2e-3));
        CHECK(mxp == doctest::Approx(1.0).epsilon(2e-3));
        CHECK(mpp == doctest::Approx(1.0).epsilon(2e-3));
    }
    SUBCASE("invalid extent") {
        CHECK_THROWS_AS(make_wigner(1.0, 0.0, 0.0, 11), InvalidParameter);
    }
}

TEST_CASE("presets") {
    ScanConfig config;
    apply_preset(config, "paper-fig4");
    CHECK(config.detunings.at(0) == 0.35);
    CHECK(config.detunings.count == 1);
    CHECK(config.rfs.at(0) == 5.0);

    apply_preset(config, "paper-fig5");
    CHECK(config.detunings.count == 26);
    CHECK(config.rfs.count == 10);
    CHECK(config.rolloff_mhz == 25.0);
    CHECK(config.detunings.at(10) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(apply_preset(config, "fig4"), ConfigError);
    const auto names = preset_names();
    CHECK(std::find(names.begin(), names.end(), "paper-fig4") != names.end());
}

TEST_CASE("trace CSV round trip") {
    ScanConfig config;
    config.chain.electronic_noise = 0.04;
    config.excess_peak = 0.6;
    config.detunings = {0.35, 0.35, 1};
    config.rfs = {5.0, 5.0, 1};
    config.mode = ScanMode::sampled;
    config.n_averages = 200;
    config.chi_points = 48;
    config.seed = 17;
    const PhaseTraces traces = run_phase_trace(config);

    TempDir dir("csv");
    {
        std::ofstream out = open_output(dir.file("trace.csv"));
        write_noise_trace(out, traces.signal, config.chain, "signal");
        close_output(out, dir.file("trace.csv"));
    }
    const TraceFile read = read_noise_trace(dir.file("trace.csv"));
    CHECK(read.label == "signal");
    CHECK(read.chain.visibility == doctest::Approx(config.chain.visibility).epsilon(1e-11));
    CHECK(read.chain.electronic_noise == doctest::Approx(0.04).epsilon(1e-11));
    CHECK(read.chain.rng_seed == traces.signal.seed);
    CHECK(read.trace.n_averages == 200);
    CHECK(read.trace.sql_reference == doctest::Approx(1.04).epsilon(1e-11));
    CHECK(read.trace.detuning_ghz == doctest::Approx(0.35).epsilon(1e-11));
    REQUIRE(read.trace.chis.size() == traces.signal.chis.size());
    REQUIRE(read.trace.has_sampled());
    for (std::size_t i = 0; i < read.trace.chis.size(); ++i) {
        CHECK(read.trace.chis[i] == doctest::Approx(traces.signal.chis[i]).epsilon(1e-10));
        CHECK(read.trace.analytic[i] ==
              doctest::Approx(traces.signal.analytic[i]).epsilon(1e-10));
        CHECK(read.trace.sampled[i] ==
              doctest::Approx(traces.signal.sampled[i]).epsilon(1e-10));
    }

    SUBCASE("two-section file: the reader returns the first section") {
        {
            std::ofstream out = open_output(dir.file("phase.csv"));
            write_phase_trace_file(out, traces.signal, traces.reference, config.chain);
            close_output(out, dir.file("phase.csv"));
        }
        const TraceFile first = read_noise_trace(dir.file("phase.csv"));
        CHECK(first.trace.chis.size() == traces.signal.chis.size());
        CHECK(first.trace.analytic[5] ==
              doctest::Approx(traces.signal.analytic[5]).epsilon(1e-10));
    }
    SUBCASE("a refit of the written trace reproduces the cell parameters") {
        const TraceFile back = read_noise_trace(dir.file("trace.csv"));
        const std::array<TraceParam, 2> free{TraceParam::gl, TraceParam::alpha_l};
        TraceParams known{0.0, 0.0, config.excess_model().at(5.0, 0.35), 0.04};
        const FitResult fit = fit_noise_trace(back.trace, back.chain, free, known);
        REQUIRE(fit.converged);
        const double gl_true = gl_at(config.medium, 0.35);
        const double al_true = alpha_at(config.medium, 0.35);
        CHECK(fit.param("gl") == doctest::Approx(gl_true).epsilon(0.2));
        CHECK(fit.param("alpha_l") == doctest::Approx(al_true).scale(1.0).epsilon(0.2));
    }
}

TEST_CASE("round trips for the remaining file formats") {
    TempDir dir("io");
    SUBCASE("polarimeter scan CSV") {
        {
            std::ofstream out = open_output(dir.file("scan.csv"));
            out << "# polarimeter scan\nepsilon_rad,phi_rad\n";
            out << "0.01,0.021\n-0.01,-0.019\n0.02,0.041\n-0.02,-0.042\n";
            close_output(out, dir.file("scan.csv"));
        }
        const PolarimeterScan scan = read_polarimeter_scan(dir.file("scan.csv"));
        REQUIRE(scan.epsilons.size() == 4);
        CHECK(scan.epsilons[1] == -0.01);
        CHECK(scan.angles[2] == 0.041);
        CHECK_THROWS_AS(read_polarimeter_scan(dir.file("absent.csv")), IoError);
    }
    SUBCASE("fit result JSON") {
        FitResult result;
        result.param_names = {"gl", "alpha_l"};
        result.params = {1.25, 0.07};
        result.covariance_diag = {4e-4, 1e-6};
        result.residual_rms = 0.01;
        result.converged = true;
        result.iterations = 17;
        std::ostringstream out;
        write_fit_result(out, result);
        const auto parsed = nlohmann::json::parse(out.str());
        CHECK(parsed.at("params").at("gl").get<double>() == doctest::Approx(1.25));
        CHECK(parsed.at("stderr").at("alpha_l").get<double>() ==
              doctest::Approx(1e-3).epsilon(1e-9));
        CHECK(parsed.at("converged").get<bool>());
        CHECK(parsed.at("iterations").get<int>() == 17);
        CHECK(parsed.at("residual_rms").get<double>() == doctest::Approx(0.01));
    }
    SUBCASE("noise map CSV carries axes and preamble") {
        ScanConfig config;
        config.detunings = {0.0, 1.0, 2};
        config.rfs = {5.0, 5.0, 1};
        const NoiseMap map = run_noise_map(config);
        std::ostringstream out;
        write_noise_map(out, map, config);
        const std::string text = out.str();
        CHECK(text.find("detuning_ghz,rf_mhz,min_db,excess_linear\n") != std::string::npos);
        CHECK(text.find("# electronic_noise_subtracted = 1\n") != std::string::npos);
        CHECK(text.find('\r') == std::string::npos);
    }
    SUBCASE("wigner grid CSV") {
        const WignerGrid grid = make_wigner(1.0, 0.1, 3.0, 5);
        std::ostringstream out;
        write_wigner(out, grid);
        std::istringstream lines(out.str());
        std::string header;
        std::getline(lines, header);
        CHECK(header.substr(0, 2) == "x,");
        std::size_t rows = 0;
        for (std::string line; std::getline(lines, line);) {
            ++rows;
        }
        CHECK(rows == 5);
    }
}

TEST_CASE("command line interface") {
    TempDir dir("cli");
    ScanConfig config;
    config.detunings = {0.3, 0.4, 2};
    config.rfs = {5.0, 5.0, 1};
    config.chi_points = 32;
    config.excess_peak = 0.6;
    save_config(config, dir.file("config.json"));

    SUBCASE("noise-map produces the documented CSV") {
        const std::string out = dir.file("map-out");
        CHECK(run_cli("noise-map --config " + dir.file("config.json") + " --out " + out) == 0);
        const std::string text = slurp(out + "/noise_map.csv");
        CHECK(text.find("detuning_ghz,rf_mhz,min_db,excess_linear\n") != std::string::npos);
        CHECK(text.find("# mode = analytic\n") != std::string::npos);
    }
    SUBCASE("phase-trace header and preamble") {
        const std::string out = dir.file("trace-out");
        CHECK(run_cli("phase-trace --config " + dir.file("config.json") + " --out " + out +
                      " --mode sampled --seed 9") == 0);
        const std::string text = slurp(out + "/phase_trace.csv");
        CHECK(text.find("chi_rad,analytic_rel_var,sampled_rel_var,analytic_db,sampled_db\n") !=
              std::string::npos);
        CHECK(text.find("# seed = 9\n") != std::string::npos);

        // same command, different thread count: byte-identical output
        const std::string out2 = dir.file("trace-out-2");
        const std::string base = std::string(SCANLAB_BIN) + " phase-trace --config " +
                                 dir.file("config.json") + " --mode sampled --seed 9 --out ";
        REQUIRE(std::system(("OMP_NUM_THREADS=1 " + base + out2 + " >/dev/null 2>&1").c_str()) == 0);
        const std::string out3 = dir.file("trace-out-3");
        REQUIRE(std::system(("OMP_NUM_THREADS=4 " + base + out3 + " >/dev/null 2>&1").c_str()) == 0);
        CHECK(slurp(out2 + "/phase_trace.csv") == slurp(out3 + "/phase_trace.csv"));
        CHECK(slurp(out2 + "/phase_trace.csv") == text);
    }
    SUBCASE("wigner writes the grid and its metadata") {
        const std::string out = dir.file("wigner-out");
        CHECK(run_cli("wigner --gl 1.0 --alpha 0.1 --points 41 --out " + out) == 0);
        CHECK(std::filesystem::exists(out + "/wigner.csv"));
        const std::string meta = slurp(out + "/wigner_meta.txt");
        CHECK(meta.find("n_points = 41") != std::string::npos);
    }
    SUBCASE("fit-trace recovers parameters from a written trace") {
        const std::string out = dir.file("fit-out");
        REQUIRE(run_cli("phase-trace --config " + dir.file("config.json") + " --out " + out) ==
                0);
        CHECK(run_cli("fit-trace " + out + "/phase_trace.csv --config " +
                      dir.file("config.json") + " --out " + out) == 0);
        const auto parsed = nlohmann::json::parse(slurp(out + "/fit_trace.json"));
        CHECK(parsed.at("converged").get<bool>());
        CHECK(parsed.at("params").contains("gl"));
    }
    SUBCASE("selfrotation-scan emits one row per detuning") {
        const std::string out = dir.file("rot-out");
        CHECK(run_cli("selfrotation-scan --config " + dir.file("config.json") + " --out " +
                      out) == 0);
        const std::string text = slurp(out + "/selfrotation_scan.csv");
        CHECK(text.find("detuning_ghz,gl_true,gl_fitted,gl_stderr,alpha_l,converged\n") !=
              std::string::npos);
        CHECK(std::count(text.begin(), text.end(), '\n') >= 3);  // preamble + header + 2 rows
    }
    SUBCASE("failure exit codes") {
        CHECK(run_cli("noise-map --config " + dir.file("nope.json")) == 4);

        std::ofstream(dir.file("bad.json")) << "{\"scan\": {\"sed\": 1}}";
        CHECK(run_cli("noise-map --config " + dir.file("bad.json")) == 2);

        CHECK(run_cli("noise-map --preset no-such-preset --out " + dir.file("p")) == 2);
        CHECK(run_cli("noise-map --mode exact") == 2);
        CHECK(run_cli("no-such-command") == 2);

        // output path whose parent is a regular file
        std::ofstream(dir.file("blocker")) << "x";
        CHECK(run_cli("noise-map --config " + dir.file("config.json") + " --out " +
                      dir.file("blocker") + "/sub") == 4);

        // degenerate polarimeter data: fit failure, exit 3
        std::ofstream(dir.file("flat.csv"))
            << "epsilon_rad,phi_rad\n0.01,0.02\n0.01,0.02\n0.01,0.02\n0.01,0.02\n";
        CHECK(run_cli("fit-polarimeter " + dir.file("flat.csv") + " --out " + dir.file("fp")) ==
              3);
    }
}
