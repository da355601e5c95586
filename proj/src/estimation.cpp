#include "sqz/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite_data(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw InvalidParameter(std::string(what) + " contains non-finite values");
        }
    }
}

double wrap_half_period(double chi) {
    chi = std::fmod(chi, kPi);
    if (chi < 0.0) {
        chi += kPi;
    }
    return chi;
}

// Vertex of the parabola through three points; falls back to the middle
// point when the data is locally flat.
RefinedExtremum parabola_vertex(double x0, double y0, double x1, double y1, double x2,
                                double y2) {
    const double d01 = x1 - x0;
    const double d12 = x1 - x2;
    const double num = d01 * d01 * (y1 - y2) - d12 * d12 * (y1 - y0);
    const double den = d01 * (y1 - y2) - d12 * (y1 - y0);
    if (std::abs(den) < 1e-300) {
        return {x1, y1};
    }
    double xv = x1 - 0.5 * num / den;
    xv = std::clamp(xv, std::min(x0, x2), std::max(x0, x2));
    // Lagrange evaluation at the vertex
    const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    return {xv, y0 * l0 + y1 * l1 + y2 * l2};
}

}  // namespace

double FitResult::param(std::string_view name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i) {
        if (param_names[i] == name) {
            return params[i];
        }
    }
    throw InvalidParameter("unknown fit parameter: " + std::string(name));
}

double FitResult::std_error(std::string_view name) const {
    for (std::size_t i = 0; i < param_names.size(); ++i) {
        if (param_names[i] == name) {
            return std::sqrt(covariance_diag[i]);
        }
    }
    throw InvalidParameter("unknown fit parameter: " + std::string(name));
}

FitResult fit_gl_polynomial(const PolarimeterScan& scan, int odd_degree) {
    if (odd_degree != 1 && odd_degree != 3) {
        throw InvalidParameter("odd_degree must be 1 or 3");
    }
    const std::size_t n = scan.epsilons.size();
    if (scan.angles.size() != n) {
        throw InvalidParameter("epsilon and angle lists must have equal length");
    }
    const std::size_t min_points = (odd_degree == 3) ? 6 : 4;
    if (n < min_points) {
        throw InvalidParameter("scan needs at least " + std::to_string(min_points) + " points");
    }
    require_finite_data(scan.epsilons, "epsilons");
    require_finite_data(scan.angles, "angles");

    const bool all_equal = std::all_of(scan.epsilons.begin(), scan.epsilons.end(),
                                       [&](double e) { return e == scan.epsilons.front(); });
    if (all_equal) {
        throw DegenerateFit("all ellipticities equal: design matrix is rank deficient");
    }
    std::vector<double> sorted = scan.epsilons;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidParameter("ellipticities must be distinct");
    }

    FitResult result;
    result.converged = true;
    result.iterations = 1;

    if (odd_degree == 1) {
        double s2 = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s2 += scan.epsilons[i] * scan.epsilons[i];
            sy += scan.epsilons[i] * scan.angles[i];
        }
        if (s2 <= 0.0) {
            throw DegenerateFit("ellipticity scan has zero spread");
        }
        const double c1 = sy / s2;
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = scan.angles[i] - c1 * scan.epsilons[i];
            rss += r * r;
        }
        const double sigma2 = rss / static_cast<double>(n - 1);
        result.param_names = {"gl"};
        result.params = {c1};
        result.covariance_diag = {std::max(sigma2 / s2, 1e-300)};
        result.residual_rms = std::sqrt(rss / static_cast<double>(n));
        return result;
    }

    // cubic: design columns (e, e^3)
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = scan.epsilons[i];
        const double e3 = e * e * e;
        a11 += e * e;
        a12 += e * e3;
        a22 += e3 * e3;
        b1 += e * scan.angles[i];
        b2 += e3 * scan.angles[i];
    }
    const double det = a11 * a22 - a12 * a12;
    if (!(det > 1e-14 * a11 * a22)) {
        throw DegenerateFit("cubic design matrix is numerically singular");
    }
    const double c1 = (a22 * b1 - a12 * b2) / det;
    const double c3 = (a11 * b2 - a12 * b1) / det;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = scan.epsilons[i];
        const double r = scan.angles[i] - (c1 * e + c3 * e * e * e);
        rss += r * r;
    }
    const double sigma2 = rss / static_cast<double>(n - 2);
    result.param_names = {"gl", "c3"};
    result.params = {c1, c3};
    result.covariance_diag = {std::max(sigma2 * a22 / det, 1e-300),
                             std::max(sigma2 * a11 / det, 1e-300)};
    result.residual_rms = std::sqrt(rss / static_cast<double>(n));
    return result;
}

namespace {

struct FreeLayout {
    bool gl = false, alpha_l = false, excess = false, n_el = false;
    std::vector<TraceParam> order;  // canonical order of the free set
};

FreeLayout layout_from(std::span<const TraceParam> free_params) {
    FreeLayout layout;
    for (TraceParam p : free_params) {
        switch (p) {
            case TraceParam::gl: layout.gl = true; break;
            case TraceParam::alpha_l: layout.alpha_l = true; break;
            case TraceParam::excess: layout.excess = true; break;
            case TraceParam::n_el: layout.n_el = true; break;
        }
    }
    if (layout.gl) layout.order.push_back(TraceParam::gl);
    if (layout.alpha_l) layout.order.push_back(TraceParam::alpha_l);
    if (layout.excess) layout.order.push_back(TraceParam::excess);
    if (layout.n_el) layout.order.push_back(TraceParam::n_el);
    return layout;
}

TraceParams unpack(const FreeLayout& layout, std::span<const double> x,
                   const TraceParams& known) {
    TraceParams full = known;
    std::size_t k = 0;
    for (TraceParam p : layout.order) {
        const double v = x[k++];
        switch (p) {
            case TraceParam::gl: full.gl = v; break;
            case TraceParam::alpha_l: full.alpha_l = v; break;
            case TraceParam::excess: full.excess = v; break;
            case TraceParam::n_el: full.n_el = v; break;
        }
    }
    return full;
}

const char* param_name(TraceParam p) {
    switch (p) {
        case TraceParam::gl: return "gl";
        case TraceParam::alpha_l: return "alpha_l";
        case TraceParam::excess: return "excess";
        case TraceParam::n_el: return "n_el";
    }
    return "?";
}

}  // namespace

FitResult fit_noise_trace(const NoiseTrace& trace, const DetectionChain& chain_known,
                          std::span<const TraceParam> free_params, const TraceParams& known,
                          const LevMarOptions& options) {
    chain_known.validate();
    const std::size_t n = trace.chis.size();
    if (n < 8) {
        throw InvalidParameter("noise-trace fit needs at least 8 phase points");
    }
    const auto [lo_it, hi_it] = std::minmax_element(trace.chis.begin(), trace.chis.end());
    const double span = *hi_it - *lo_it;
    const double step = span / static_cast<double>(n - 1);
    if (span + step < kPi - 1e-9) {
        throw InvalidParameter("phase points must span at least pi");
    }
    const std::vector<double>& y = trace.curve();
    if (y.size() != n) {
        throw InvalidParameter("trace value list length mismatch");
    }
    require_finite_data(y, "trace values");

    FreeLayout layout = layout_from(free_params);
    const std::size_t dim = layout.order.size();
    if (dim == 0) {
        throw InvalidParameter("at least one parameter must be free");
    }
    if (dim > n / 2) {
        throw InvalidParameter("too many free parameters for this trace");
    }

    // Inverse-sigma weights for sampled traces: the mean-square estimator of
    // a variance v over M draws has standard deviation v sqrt(2/M).
    std::vector<double> weights(n, 1.0);
    if (trace.has_sampled() && trace.n_averages >= 2) {
        const double rel = std::sqrt(2.0 / static_cast<double>(trace.n_averages));
        for (std::size_t i = 0; i < n; ++i) {
            weights[i] = 1.0 / (std::max(y[i], 1e-9) * rel);
        }
    }

    auto model_value = [&](const TraceParams& p, double chi) {
        DetectionChain chain = chain_known;
        chain.electronic_noise = p.n_el;
        const GaussianState state = apply_loss(shear(vacuum(), p.gl), p.alpha_l);
        return homodyne_noise(state, chain, p.excess, chi);
    };
    ResidualFn residuals = [&](std::span<const double> x, std::span<double> out) {
        const TraceParams p = unpack(layout, x, known);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = (y[i] - model_value(p, trace.chis[i])) * weights[i];
        }
    };

    std::vector<double> lower(dim), upper(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        switch (layout.order[k]) {
            case TraceParam::gl: lower[k] = -50.0; upper[k] = 50.0; break;
            case TraceParam::alpha_l: lower[k] = 0.0; upper[k] = 1.0 - 1e-9; break;
            case TraceParam::excess: lower[k] = 0.0; upper[k] = 1e3; break;
            case TraceParam::n_el: lower[k] = 0.0; upper[k] = 1e3; break;
        }
    }

    // Coarse starts; the gl sweep covers both signs to dodge the sign/phase
    // degeneracy's wrong-sign basin.
    static constexpr double kGlStarts[8] = {0.25, -0.25, 1.0, -1.0, 2.5, -2.5, 5.0, -5.0};
    std::vector<std::vector<double>> starts;
    auto base_start = [&]() {
        std::vector<double> s(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            switch (layout.order[k]) {
                case TraceParam::gl: s[k] = known.gl; break;
                case TraceParam::alpha_l: s[k] = std::clamp(known.alpha_l, 0.01, 0.5); break;
                case TraceParam::excess: s[k] = std::max(known.excess, 0.01); break;
                case TraceParam::n_el: s[k] = std::max(known.n_el, 0.001); break;
            }
        }
        return s;
    };
    if (layout.gl) {
        for (double g0 : kGlStarts) {
            std::vector<double> s = base_start();
            for (std::size_t k = 0; k < dim; ++k) {
                if (layout.order[k] == TraceParam::gl) {
                    s[k] = g0;
                }
            }
            starts.push_back(std::move(s));
        }
    } else {
        starts.push_back(base_start());
    }

    LevMarResult best;
    bool have_best = false;
    for (const std::vector<double>& s : starts) {
        LevMarResult r = levmar_fit(residuals, s, lower, upper, n, options);
        const bool better = !have_best || (r.converged && !best.converged) ||
                            (r.converged == best.converged && r.cost < best.cost);
        if (better) {
            best = std::move(r);
            have_best = true;
        }
    }

    FitResult result;
    for (TraceParam p : layout.order) {
        result.param_names.emplace_back(param_name(p));
    }
    result.params = best.params;
    result.covariance_diag = best.covariance_diag;
    result.converged = best.converged;
    result.iterations = best.iterations;
    for (double c : best.covariance_diag) {
        if (!std::isfinite(c) || c <= 0.0) {
            result.converged = false;  // unidentifiable at the optimum
        }
    }

    const TraceParams fitted = unpack(layout, best.params, known);
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - model_value(fitted, trace.chis[i]);
        rss += r * r;
    }
    result.residual_rms = std::sqrt(rss / static_cast<double>(n));
    return result;
}

FitResult fit_noise_trace(const NoiseTrace& trace, const DetectionChain& chain_known,
                          std::span<const TraceParam> free_params) {
    TraceParams known;
    known.n_el = chain_known.electronic_noise;
    return fit_noise_trace(trace, chain_known, free_params, known);
}

RefinedExtremum refine_minimum(std::span<const double> chis, std::span<const double> values) {
    if (chis.empty() || chis.size() != values.size()) {
        throw InvalidParameter("refinement needs matching non-empty grids");
    }
    const std::size_t n = chis.size();
    std::size_t i_min = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (values[i] < values[i_min]) {
            i_min = i;
        }
    }
    if (n < 3) {
        return {wrap_half_period(chis[i_min]), values[i_min]};
    }
    const double span = chis[n - 1] - chis[0];
    const double step = span / static_cast<double>(n - 1);
    const bool covers_period = span + step >= kPi - 1e-6;

    double x0, y0, x2, y2;
    if (i_min == 0) {
        if (!covers_period) {
            return {wrap_half_period(chis[0]), values[0]};
        }
        x0 = chis[n - 1] - kPi;
        y0 = values[n - 1];
    } else {
        x0 = chis[i_min - 1];
        y0 = values[i_min - 1];
    }
    if (i_min == n - 1) {
        if (!covers_period) {
            return {wrap_half_period(chis[n - 1]), values[n - 1]};
        }
        x2 = chis[0] + kPi;
        y2 = values[0];
    } else {
        x2 = chis[i_min + 1];
        y2 = values[i_min + 1];
    }
    RefinedExtremum v = parabola_vertex(x0, y0, chis[i_min], values[i_min], x2, y2);
    v.chi = wrap_half_period(v.chi);
    return v;
}

SqueezingSummary squeezing_summary(const NoiseTrace& trace) {
    if (trace.chis.empty()) {
        throw InvalidParameter("trace is empty");
    }
    const std::vector<double>& y = trace.curve();
    if (y.size() != trace.chis.size()) {
        throw InvalidParameter("trace value list length mismatch");
    }
    const RefinedExtremum lo = refine_minimum(trace.chis, y);

    std::vector<double> negated(y.size());
    std::transform(y.begin(), y.end(), negated.begin(), [](double v) { return -v; });
    RefinedExtremum hi = refine_minimum(trace.chis, negated);
    hi.value = -hi.value;

    SqueezingSummary summary;
    summary.min_db = to_db(lo.value / trace.sql_reference);
    summary.max_db = to_db(hi.value / trace.sql_reference);
    summary.chi_at_min = lo.chi;
    return summary;
}

}  // namespace sqz
