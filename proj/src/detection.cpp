#include "sqz/detection.hpp"

#include <cmath>
#include <utility>

#include "sqz/errors.hpp"
#include "sqz/rng.hpp"

namespace sqz {

void DetectionChain::validate() const {
    if (!std::isfinite(visibility) || visibility <= 0.0 || visibility > 1.0) {
        throw InvalidParameter("visibility must lie in (0, 1]");
    }
    if (!std::isfinite(pd_efficiency) || pd_efficiency <= 0.0 || pd_efficiency > 1.0) {
        throw InvalidParameter("photodiode efficiency must lie in (0, 1]");
    }
    if (!std::isfinite(electronic_noise) || electronic_noise < 0.0) {
        throw InvalidParameter("electronic noise must be >= 0");
    }
}

DetectionChain DetectionChain::from_efficiencies(double mode_match, double pd_efficiency,
                                                double electronic_noise, std::uint64_t rng_seed) {
    if (!std::isfinite(mode_match) || mode_match <= 0.0 || mode_match > 1.0) {
        throw InvalidParameter("mode-matching efficiency must lie in (0, 1]");
    }
    DetectionChain chain{std::sqrt(mode_match), pd_efficiency, electronic_noise, rng_seed};
    chain.validate();
    return chain;
}

ExcessNoiseModel::ExcessNoiseModel(double gamma_mhz, double peak_amplitude, MediumModel profile)
    : gamma_mhz_(gamma_mhz), peak_amplitude_(peak_amplitude), profile_(std::move(profile)) {
    if (!std::isfinite(gamma_mhz_) || gamma_mhz_ <= 0.0) {
        throw InvalidParameter("linewidth gamma must be positive");
    }
    if (!std::isfinite(peak_amplitude_) || peak_amplitude_ < 0.0) {
        throw InvalidParameter("excess-noise peak amplitude must be >= 0");
    }
    alpha_peak_ = absorption_peak(profile_).value;
}

double ExcessNoiseModel::at(double rf_mhz, double detuning_ghz) const {
    if (!std::isfinite(rf_mhz) || rf_mhz < 0.0) {
        throw InvalidParameter("RF frequency must be >= 0");
    }
    if (alpha_peak_ <= 0.0) {
        return 0.0;  // transparent medium scatters nothing
    }
    const double profile = alpha_at(profile_, detuning_ghz) / alpha_peak_;
    const double g2 = gamma_mhz_ * gamma_mhz_;
    return peak_amplitude_ * profile * g2 / (g2 + rf_mhz * rf_mhz);
}

double polarimeter_angle(double s1, double s2) {
    if (!std::isfinite(s1) || !std::isfinite(s2) || s1 + s2 <= 0.0) {
        throw InvalidParameter("polarimeter requires a positive total signal");
    }
    return (s1 - s2) / (2.0 * (s1 + s2));
}

PolarimeterSignals simulate_polarimeter(const MediumModel& model, double detuning_ghz,
                                        Ellipticity eps, double total_power, double noise_rms,
                                        std::uint64_t seed) {
    if (!std::isfinite(total_power) || total_power <= 0.0) {
        throw InvalidParameter("polarimeter total power must be positive");
    }
    if (!std::isfinite(noise_rms) || noise_rms < 0.0) {
        throw InvalidParameter("polarimeter noise RMS must be >= 0");
    }
    const double phi = self_rotation_angle(model, detuning_ghz, eps);
    rng::Stream stream(rng::derive(seed, {rng::stream_tag::polarimeter,
                                          rng::coord_bits(detuning_ghz),
                                          rng::coord_bits(eps.rad())}));
    PolarimeterSignals out;
    out.s1 = total_power * (0.5 + phi) + noise_rms * stream.next_normal();
    out.s2 = total_power * (0.5 - phi) + noise_rms * stream.next_normal();
    return out;
}

double homodyne_noise(const GaussianState& cell_output, const DetectionChain& chain,
                      double excess, QuadratureAngle chi) {
    chain.validate();
    if (!std::isfinite(excess) || excess < 0.0) {
        throw InvalidParameter("excess noise must be >= 0");
    }
    const double eta = chain.total_efficiency();
    const double cell_var = variance_at(add_isotropic_noise(cell_output, excess), chi);
    return eta * cell_var + (1.0 - eta) + chain.electronic_noise;
}

NoiseTrace sample_noise_trace(const GaussianState& cell_output, const DetectionChain& chain,
                              double excess, std::span<const double> chis, int n_averages,
                              std::uint64_t trace_id, Exec exec) {
    chain.validate();
    if (n_averages < 2) {
        throw InvalidParameter("sampling requires n_averages >= 2");
    }
    NoiseTrace trace;
    trace.chis.assign(chis.begin(), chis.end());
    trace.analytic.resize(chis.size());
    trace.sampled.resize(chis.size());
    trace.n_averages = n_averages;
    trace.sql_reference = 1.0 + chain.electronic_noise;
    trace.seed = chain.rng_seed;

    parallel_for(chis.size(), exec, [&](std::size_t i) {
        const double total_var = homodyne_noise(cell_output, chain, excess, trace.chis[i]);
        trace.analytic[i] = total_var;
        const double amplitude = std::sqrt(total_var);
        rng::Stream stream(
            rng::derive(chain.rng_seed, {trace_id, rng::coord_bits(trace.chis[i])}));
        double sum_sq = 0.0;
        for (int k = 0; k < n_averages; ++k) {
            const double q = amplitude * stream.next_normal();
            sum_sq += q * q;
        }
        trace.sampled[i] = sum_sq / static_cast<double>(n_averages);
    });
    return trace;
}

double correct_to_cell_output(double observed_rel_variance, const DetectionChain& chain) {
    chain.validate();
    if (!std::isfinite(observed_rel_variance)) {
        throw InvalidParameter("observed variance must be finite");
    }
    const double eta = chain.total_efficiency();
    const double floor = (1.0 - eta) + chain.electronic_noise;
    if (observed_rel_variance <= floor) {
        throw UnphysicalObservation("observed variance is at or below the chain noise floor");
    }
    return (observed_rel_variance - floor) / eta;
}

}  // namespace sqz
