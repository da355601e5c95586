#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sqz/config.hpp"
#include "sqz/detection.hpp"
#include "sqz/gaussian.hpp"
#include "sqz/parallel.hpp"

namespace sqz {

// Minimum detected noise (dB relative to SQL, electronic noise subtracted)
// and linear excess noise over the detuning x RF grid. Row-major with the
// detuning index slow.
struct NoiseMap {
    std::vector<double> detunings;
    std::vector<double> rfs;
    std::vector<double> min_db;
    std::vector<double> excess_linear;

    std::size_t index(std::size_t i_detuning, std::size_t i_rf) const {
        return i_detuning * rfs.size() + i_rf;
    }
    double min_db_at(std::size_t i_detuning, std::size_t i_rf) const {
        return min_db[index(i_detuning, i_rf)];
    }
    double excess_at(std::size_t i_detuning, std::size_t i_rf) const {
        return excess_linear[index(i_detuning, i_rf)];
    }
};

// Optional RF roll-off of the shear strength; rolloff_mhz = 0 leaves gl
// untouched. Phenomenological, not part of the core cell model.
double effective_gl(const ScanConfig& config, double detuning_ghz, double rf_mhz);

// Cell output state for one grid point, including the roll-off.
GaussianState cell_output_at(const ScanConfig& config, double detuning_ghz, double rf_mhz);

// Full (detuning x RF) sweep. Analytic mode minimizes over the quadrature
// angle exactly; sampled mode estimates the minimum from a finite-average
// phase trace with parabolic refinement. Deterministic for a fixed seed:
// every grid point derives its noise stream from its own (detuning, rf)
// coordinates, so thread count and sub-gridding cannot change values.
NoiseMap run_noise_map(const ScanConfig& config, Exec exec = Exec::parallel);

struct PhaseTraces {
    NoiseTrace signal;
    NoiseTrace reference;  // blocked squeezed path: vacuum input, no excess
};

// Noise vs LO phase at the first grid point of the config (use a preset or
// a single-point grid to choose it).
PhaseTraces run_phase_trace(const ScanConfig& config, Exec exec = Exec::parallel);

struct SelfRotationRow {
    double detuning_ghz = 0.0;
    double gl_true = 0.0;
    double gl_fitted = 0.0;
    double gl_stderr = 0.0;
    double alpha_l = 0.0;
    bool converged = false;
};

// Synthetic polarimeter ellipticity scans per detuning, each fitted for gl.
// Fit failures flag the row and the scan continues.
std::vector<SelfRotationRow> run_selfrotation_scan(const ScanConfig& config,
                                                   std::span<const double> epsilons,
                                                   double total_power, double noise_rms,
                                                   int fit_degree = 1);

// Phase-space density of the lumped shear-plus-loss output on a symmetric
// square grid.
WignerGrid make_wigner(double gl, double alpha_l, double half_range, std::size_t n_points,
                       Exec exec = Exec::parallel);

// Named parameter bundles; unknown names raise ConfigError.
void apply_preset(ScanConfig& config, std::string_view name);
std::vector<std::string_view> preset_names();

}  // namespace sqz
