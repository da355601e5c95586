#pragma once

#include <string>
#include <vector>

#include "sqz/gaussian.hpp"

namespace sqz {

// Absorption profile of a spectral line component. Rotation always uses the
// matching dispersive (odd) profile.
enum class LineShape { gaussian, lorentzian };

// One spectral feature of the vapor cell.
//
// width_ghz is the HWHM for the lorentzian shape and the 1/e half-width for
// the gaussian shape. rotation_amplitude is the peak magnitude of this
// line's contribution to gl (reached at center +- width); absorption_amplitude
// is its on-center contribution to alpha*l.
struct LineComponent {
    double center_ghz = 0.0;
    double width_ghz = 1.0;
    double rotation_amplitude = 0.0;
    double absorption_amplitude = 0.0;
    LineShape shape = LineShape::gaussian;
};

// Small ellipticity of the pump polarization, in radians.
class Ellipticity {
public:
    explicit Ellipticity(double radians);

    double rad() const { return rad_; }
    // True above 0.1 rad, where the small-signal treatment starts to strain.
    bool beyond_small_signal() const { return std::abs(rad_) > 0.1; }

private:
    double rad_;
};

// Detuning-dependent vapor-cell model: gl(detuning) and alpha*l(detuning)
// built from line components, plus the propagation slicing settings.
// Immutable after construction.
class MediumModel {
public:
    MediumModel(std::vector<LineComponent> lines, std::string temperature_label, int slices,
                double saturation_cubic, double window_min_ghz, double window_max_ghz);

    const std::vector<LineComponent>& lines() const { return lines_; }
    const std::string& temperature_label() const { return temperature_label_; }
    int slices() const { return slices_; }
    double saturation_cubic() const { return saturation_cubic_; }
    double window_min_ghz() const { return window_min_ghz_; }
    double window_max_ghz() const { return window_max_ghz_; }

    bool within_window(double detuning_ghz) const {
        return detuning_ghz >= window_min_ghz_ && detuning_ghz <= window_max_ghz_;
    }

private:
    std::vector<LineComponent> lines_;
    std::string temperature_label_;
    int slices_;
    double saturation_cubic_;
    double window_min_ghz_;
    double window_max_ghz_;
};

// Self-rotation parameter gl at the given detuning (sum of dispersive
// line profiles). Evaluation outside the declared window is permitted.
double gl_at(const MediumModel& model, double detuning_ghz);

// Absorption alpha*l at the given detuning, in [0, 1). Throws ModelInvalid
// if the summed line profiles reach 1.
double alpha_at(const MediumModel& model, double detuning_ghz);

// Polarization rotation angle phi = gl e - sat3 gl e^3 for pump
// ellipticity e; sat3 = 0 is the plain linear law.
double self_rotation_angle(const MediumModel& model, double detuning_ghz, Ellipticity eps);

// Shear-plus-loss propagation with explicit coefficients. slices = 1 is the
// lumped model (full shear, then full loss). slices = N alternates N shear
// steps of gl/N with N loss steps of 1 - (1-alpha)^(1/N), keeping the total
// linear transmission exact for every N.
GaussianState propagate_coefficients(double gl, double alpha_l, int slices,
                                     const GaussianState& input);

// Propagation through the cell at the given detuning.
GaussianState propagate(const MediumModel& model, double detuning_ghz,
                        const GaussianState& input);

struct AbsorptionPeak {
    double detuning_ghz = 0.0;
    double value = 0.0;
};

// Maximum of alpha_at over the declared window, located on a fixed fine
// grid. Defines the zero-detuning reference of a measured spectrum.
AbsorptionPeak absorption_peak(const MediumModel& model);

// Illustrative four-line model: two main hyperfine features plus two weaker
// side lobes near 1 and 4 GHz. Amplitudes are plausible defaults for a hot
// Rb cell, not measured data.
MediumModel default_model();

}  // namespace sqz
