#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sqz/gaussian.hpp"
#include "sqz/medium.hpp"
#include "sqz/parallel.hpp"

namespace sqz {

// Balanced-homodyne detection chain. Mode-matching efficiency is the square
// of the interference visibility; the photodiode efficiency multiplies it.
// Electronic noise is additive, in SQL units, and appears identically in
// signal and blocked-path (shot-noise reference) traces.
struct DetectionChain {
    double visibility = 1.0;
    double pd_efficiency = 1.0;
    double electronic_noise = 0.0;
    std::uint64_t rng_seed = 0;

    double mode_match_efficiency() const { return visibility * visibility; }
    double total_efficiency() const { return visibility * visibility * pd_efficiency; }

    void validate() const;

    // Chain specified by mode-matching efficiency V^2 instead of V.
    static DetectionChain from_efficiencies(double mode_match, double pd_efficiency,
                                            double electronic_noise, std::uint64_t rng_seed = 0);
};

// Resonance-fluorescence excess noise: phase-insensitive, with a Lorentzian
// RF spectrum of half-width gamma and a detuning dependence following the
// cell's absorption profile normalized to unit peak.
class ExcessNoiseModel {
public:
    ExcessNoiseModel(double gamma_mhz, double peak_amplitude, MediumModel profile);

    double gamma_mhz() const { return gamma_mhz_; }
    double peak_amplitude() const { return peak_amplitude_; }
    const MediumModel& profile() const { return profile_; }

    // Excess variance (SQL units) at RF frequency rf_mhz and laser detuning.
    double at(double rf_mhz, double detuning_ghz) const;

private:
    double gamma_mhz_;
    double peak_amplitude_;
    MediumModel profile_;
    double alpha_peak_;
};

inline double excess_noise(const ExcessNoiseModel& model, double rf_mhz, double detuning_ghz) {
    return model.at(rf_mhz, detuning_ghz);
}

// Quadrature-noise-vs-LO-phase record. `analytic` holds the exact chain
// output; `sampled` (optional) holds finite-average spectrum-analyzer
// estimates. Values are variances in SQL units; sql_reference is the
// blocked-path level (1 + electronic noise) that measured curves are
// compared against.
struct NoiseTrace {
    std::vector<double> chis;
    std::vector<double> analytic;
    std::vector<double> sampled;
    int n_averages = 0;
    double sql_reference = 1.0;
    double detuning_ghz = 0.0;
    double rf_mhz = 0.0;
    std::uint64_t seed = 0;

    bool has_sampled() const { return !sampled.empty(); }
    const std::vector<double>& curve() const { return has_sampled() ? sampled : analytic; }
};

// Rotation angle from balanced-polarimeter DC signals:
// phi = (s1 - s2) / (2 (s1 + s2)).
double polarimeter_angle(double s1, double s2);

struct PolarimeterSignals {
    double s1 = 0.0;
    double s2 = 0.0;
};

// Photodiode signals of the balanced polarimeter for a probe of the given
// total power and ellipticity, with additive Gaussian readout noise.
// Deterministic for a fixed seed; the noise stream is keyed by detuning
// and ellipticity, not by call order.
PolarimeterSignals simulate_polarimeter(const MediumModel& model, double detuning_ghz,
                                        Ellipticity eps, double total_power, double noise_rms,
                                        std::uint64_t seed);

// Detected noise at LO phase chi, relative to SQL:
//   N(chi) = eta_tot * variance(state + excess) + (1 - eta_tot) + n_el.
// Blocking the squeezed path (vacuum input, zero excess) gives 1 + n_el.
double homodyne_noise(const GaussianState& cell_output, const DetectionChain& chain,
                      double excess, QuadratureAngle chi);

// Finite-average noise estimates over a phase grid: per phase, the mean
// square of n_averages Gaussian quadrature draws with variance N(chi).
// Draws are keyed by (chain seed, trace_id, chi), so identical coordinates
// reproduce identical estimates in any evaluation order.
NoiseTrace sample_noise_trace(const GaussianState& cell_output, const DetectionChain& chain,
                              double excess, std::span<const double> chis, int n_averages,
                              std::uint64_t trace_id = 0, Exec exec = Exec::parallel);

// Inverse of the chain map: infers the cell-output variance from an
// observed one. Throws UnphysicalObservation if the observation is below
// the chain's noise floor (1 - eta_tot) + n_el.
double correct_to_cell_output(double observed_rel_variance, const DetectionChain& chain);

}  // namespace sqz
