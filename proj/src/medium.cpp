#include "sqz/medium.hpp"

#include <cmath>
#include <utility>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

double dispersive_profile(double offset, double width) {
    // Odd shape with extrema +-1 at offset = +-width.
    return 2.0 * offset * width / (offset * offset + width * width);
}

double absorption_profile(double offset, double width, LineShape shape) {
    switch (shape) {
        case LineShape::gaussian: {
            const double u = offset / width;
            return std::exp(-u * u);
        }
        case LineShape::lorentzian:
            return width * width / (offset * offset + width * width);
    }
    return 0.0;
}

}  // namespace

Ellipticity::Ellipticity(double radians) : rad_(radians) {
    if (!std::isfinite(radians) || std::abs(radians) > 0.3) {
        throw InvalidParameter("ellipticity must satisfy |eps| <= 0.3 rad");
    }
}

MediumModel::MediumModel(std::vector<LineComponent> lines, std::string temperature_label,
                         int slices, double saturation_cubic, double window_min_ghz,
                         double window_max_ghz)
    : lines_(std::move(lines)),
      temperature_label_(std::move(temperature_label)),
      slices_(slices),
      saturation_cubic_(saturation_cubic),
      window_min_ghz_(window_min_ghz),
      window_max_ghz_(window_max_ghz) {
    for (const LineComponent& line : lines_) {
        if (!std::isfinite(line.center_ghz) || !std::isfinite(line.width_ghz) ||
            !std::isfinite(line.rotation_amplitude) || !std::isfinite(line.absorption_amplitude)) {
            throw InvalidParameter("line component parameters must be finite");
        }
        if (!(line.width_ghz > 0.0)) {
            throw InvalidParameter("line width must be positive");
        }
        if (line.absorption_amplitude < 0.0) {
            throw InvalidParameter("absorption amplitude must be non-negative");
        }
    }
    if (slices_ < 1) {
        throw InvalidParameter("slices must be >= 1");
    }
    if (saturation_cubic_ < 0.0 || !std::isfinite(saturation_cubic_)) {
        throw InvalidParameter("saturation coefficient must be >= 0");
    }
    if (!(window_min_ghz_ < window_max_ghz_)) {
        throw InvalidParameter("detuning window must be a non-empty interval");
    }
}

double gl_at(const MediumModel& model, double detuning_ghz) {
    double sum = 0.0;
    for (const LineComponent& line : model.lines()) {
        sum += line.rotation_amplitude *
               dispersive_profile(detuning_ghz - line.center_ghz, line.width_ghz);
    }
    return sum;
}

double alpha_at(const MediumModel& model, double detuning_ghz) {
    double sum = 0.0;
    for (const LineComponent& line : model.lines()) {
        sum += line.absorption_amplitude *
               absorption_profile(detuning_ghz - line.center_ghz, line.width_ghz, line.shape);
    }
    if (sum >= 1.0) {
        throw ModelInvalid("total absorption reaches 1 at detuning " +
                           std::to_string(detuning_ghz) + " GHz");
    }
    return sum;
}

double self_rotation_angle(const MediumModel& model, double detuning_ghz, Ellipticity eps) {
    const double gl = gl_at(model, detuning_ghz);
    const double e = eps.rad();
    return gl * e - model.saturation_cubic() * gl * e * e * e;
}

GaussianState propagate_coefficients(double gl, double alpha_l, int slices,
                                     const GaussianState& input) {
    if (slices < 1) {
        throw InvalidParameter("slices must be >= 1");
    }
    if (slices == 1) {
        return apply_loss(shear(input, gl), alpha_l);
    }
    const double step = gl / static_cast<double>(slices);
    const double slice_loss = 1.0 - std::pow(1.0 - alpha_l, 1.0 / static_cast<double>(slices));
    GaussianState state = input;
    for (int i = 0; i < slices; ++i) {
        state = apply_loss(shear(state, step), slice_loss);
    }
    return state;
}

GaussianState propagate(const MediumModel& model, double detuning_ghz,
                        const GaussianState& input) {
    return propagate_coefficients(gl_at(model, detuning_ghz), alpha_at(model, detuning_ghz),
                                  model.slices(), input);
}

AbsorptionPeak absorption_peak(const MediumModel& model) {
    constexpr int kGridPoints = 4001;
    AbsorptionPeak peak;
    const double lo = model.window_min_ghz();
    const double hi = model.window_max_ghz();
    const double step = (hi - lo) / static_cast<double>(kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
        const double d = lo + static_cast<double>(i) * step;
        const double a = alpha_at(model, d);
        if (a > peak.value) {
            peak.value = a;
            peak.detuning_ghz = d;
        }
    }
    return peak;
}

MediumModel default_model() {
    std::vector<LineComponent> lines{
        // Two main ground-state hyperfine features...
        {0.0, 0.5, 2.17, 0.198, LineShape::gaussian},
        {6.8, 0.55, 0.9, 0.30, LineShape::gaussian},
        // ...the weaker side lobes from the other isotope...
        {1.0, 0.35, 0.25, 0.12, LineShape::gaussian},
        {4.0, 0.35, 0.2, 0.10, LineShape::gaussian},
        // ...and a broad non-rotating pedestal for the optically thick
        // overlap of the whole manifold, so the far wings stay absorbing
        // (and noisy) instead of offering loss-free rotation.
        {0.7, 2.5, 0.0, 0.22, LineShape::lorentzian},
    };
    return MediumModel(std::move(lines), "70 C", 1, 0.0, -2.0, 9.0);
}

}  // namespace sqz
