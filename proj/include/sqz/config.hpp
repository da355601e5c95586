#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "sqz/detection.hpp"
#include "sqz/medium.hpp"

namespace sqz {

// Uniform sweep axis: count points from start to stop inclusive.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    double at(std::size_t i) const;
    void validate(const char* what) const;
};

enum class ScanMode { analytic, sampled };

std::string_view to_string(ScanMode mode);
ScanMode scan_mode_from_string(std::string_view text);

// Everything a scan run needs: the cell model, the detection chain, the
// excess-noise parameters, the sweep grids, and the sampling settings.
struct ScanConfig {
    MediumModel medium = default_model();
    DetectionChain chain;
    double excess_gamma_mhz = 6.0;
    double excess_peak = 0.0;
    GridSpec detunings{0.0, 0.0, 1};
    GridSpec rfs{5.0, 5.0, 1};
    std::size_t chi_points = 256;
    ScanMode mode = ScanMode::analytic;
    int n_averages = 400;
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    double rolloff_mhz = 0.0;  // 0 disables the phenomenological gl roll-off

    void validate() const;  // throws ConfigError
    ExcessNoiseModel excess_model() const;
};

// Runnable out-of-the-box defaults: illustrative medium, near-unity chain
// with a small electronic-noise floor, modest excess noise.
ScanConfig default_config();

// JSON round trip. Sections: medium, chain, excess, scan. Absent keys keep
// their defaults; unknown keys are rejected so typos cannot silently fall
// back to defaults.
ScanConfig config_from_json(const std::string& text, const std::string& origin);
std::string config_to_json(const ScanConfig& config);

ScanConfig load_config(const std::string& path);       // ConfigError / IoError
void save_config(const ScanConfig& config, const std::string& path);

}  // namespace sqz
