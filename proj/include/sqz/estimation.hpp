#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqz/detection.hpp"
#include "sqz/levmar.hpp"

namespace sqz {

// Ellipticity-scan record at one detuning: measured rotation angle for each
// prepared pump ellipticity.
struct PolarimeterScan {
    std::vector<double> epsilons;
    std::vector<double> angles;
    double detuning_ghz = 0.0;
};

// Result of a parameter fit. Parameters are reported by name in a fixed
// order; standard errors come from the linearized covariance at the optimum.
struct FitResult {
    std::vector<std::string> param_names;
    std::vector<double> params;
    std::vector<double> covariance_diag;
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;

    double param(std::string_view name) const;
    double std_error(std::string_view name) const;
};

// Odd polynomial fit phi = c1 e (+ c3 e^3) through the origin; returns
// gl = c1. odd_degree must be 1 or 3; a cubic fit needs >= 6 points.
FitResult fit_gl_polynomial(const PolarimeterScan& scan, int odd_degree);

// Parameters of the noise-trace forward model (lumped cell + chain).
struct TraceParams {
    double gl = 0.0;
    double alpha_l = 0.0;
    double excess = 0.0;
    double n_el = 0.0;
};

enum class TraceParam { gl, alpha_l, excess, n_el };

// Nonlinear least squares of a noise trace against the chain forward model.
// Free parameters are fitted within physical bounds (gl unrestricted in
// sign, alpha_l in [0, 1), excess and n_el >= 0); the rest are pinned to
// `known`. Multi-start over coarse gl initializations guards against the
// wrong-sign local minimum. On non-convergence the result carries
// converged = false rather than a silently wrong answer.
FitResult fit_noise_trace(const NoiseTrace& trace, const DetectionChain& chain_known,
                          std::span<const TraceParam> free_params, const TraceParams& known,
                          const LevMarOptions& options = {});

// Overload pinning n_el to the chain's electronic noise.
FitResult fit_noise_trace(const NoiseTrace& trace, const DetectionChain& chain_known,
                          std::span<const TraceParam> free_params);

struct SqueezingSummary {
    double min_db = 0.0;
    double max_db = 0.0;
    double chi_at_min = 0.0;
};

// Model-free extrema of a trace in dB relative to its SQL reference, with
// parabolic sub-grid refinement around the grid extremes.
SqueezingSummary squeezing_summary(const NoiseTrace& trace);

// Parabolic refinement helper shared with the scan runner: minimum of the
// curve over a pi-periodic phase grid. Returns {chi, value}.
struct RefinedExtremum {
    double chi = 0.0;
    double value = 0.0;
};
RefinedExtremum refine_minimum(std::span<const double> chis, std::span<const double> values);

}  // namespace sqz
