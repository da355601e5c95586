// Serial vs OpenMP timings for the three hot loops: the grid sweep, the
// phase-trace sampler, and the Wigner rasterizer. Run with --benchmark_filter
// to pick one family.

#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "sqz/config.hpp"
#include "sqz/detection.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/scan.hpp"

namespace {

sqz::ScanConfig map_config() {
    sqz::ScanConfig config = sqz::default_config();
    config.detunings = {-1.0, 1.5, 26};
    config.rfs = {3.0, 30.0, 10};
    config.rolloff_mhz = 25.0;
    config.mode = sqz::ScanMode::sampled;
    config.n_averages = 400;
    config.chi_points = 128;
    return config;
}

void bm_noise_map(benchmark::State& state, sqz::Exec exec) {
    const sqz::ScanConfig config = map_config();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::run_noise_map(config, exec));
    }
}

void bm_sample_trace(benchmark::State& state, sqz::Exec exec) {
    const sqz::GaussianState cell = sqz::apply_loss(sqz::shear(sqz::vacuum(), 1.0), 0.1);
    sqz::DetectionChain chain{0.98, 0.91, 0.04, 7};
    std::vector<double> chis(256);
    for (std::size_t i = 0; i < chis.size(); ++i) {
        chis[i] = std::numbers::pi * static_cast<double>(i) / 256.0;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sqz::sample_noise_trace(cell, chain, 0.05, chis, 4000, 0, exec));
    }
}

void bm_wigner(benchmark::State& state, sqz::Exec exec) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(sqz::make_wigner(1.0, 0.1, 4.5, 401, exec));
    }
}

}  // namespace

BENCHMARK_CAPTURE(bm_noise_map, serial, sqz::Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_noise_map, parallel, sqz::Exec::parallel)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_sample_trace, serial, sqz::Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_sample_trace, parallel, sqz::Exec::parallel)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_wigner, serial, sqz::Exec::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(bm_wigner, parallel, sqz::Exec::parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
