#include "sqz/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw InvalidParameter(std::string(what) + " must be finite");
    }
}

}  // namespace

GaussianState::GaussianState(const Vec2& mean, const SymMat2& cov) : mean_(mean), cov_(cov) {
    require_finite(mean.x, "mean.x");
    require_finite(mean.p, "mean.p");
    require_finite(cov.xx, "cov.xx");
    require_finite(cov.xp, "cov.xp");
    require_finite(cov.pp, "cov.pp");
    if (!(cov.xx > 0.0) || !(cov.det() > 0.0)) {
        throw InvalidParameter("covariance must be positive definite");
    }
}

GaussianState vacuum() {
    return GaussianState{};
}

GaussianState shear(const GaussianState& state, double strength) {
    require_finite(strength, "shear strength");
    const SymMat2& c = state.cov();
    SymMat2 out;
    out.xx = c.xx + 2.0 * strength * c.xp + strength * strength * c.pp;
    out.xp = c.xp + strength * c.pp;
    out.pp = c.pp;
    Vec2 mean{state.mean().x + strength * state.mean().p, state.mean().p};
    return GaussianState(mean, out);
}

GaussianState rotate(const GaussianState& state, double theta) {
    require_finite(theta, "rotation angle");
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const SymMat2& c = state.cov();
    // R cov R^T with R = [[ct, -st], [st, ct]]
    SymMat2 out;
    out.xx = ct * ct * c.xx - 2.0 * ct * st * c.xp + st * st * c.pp;
    out.xp = ct * st * (c.xx - c.pp) + (ct * ct - st * st) * c.xp;
    out.pp = st * st * c.xx + 2.0 * ct * st * c.xp + ct * ct * c.pp;
    Vec2 mean{ct * state.mean().x - st * state.mean().p,
              st * state.mean().x + ct * state.mean().p};
    return GaussianState(mean, out);
}

GaussianState apply_loss(const GaussianState& state, double loss_fraction) {
    require_finite(loss_fraction, "loss fraction");
    if (loss_fraction < 0.0 || loss_fraction > 1.0) {
        throw InvalidParameter("loss fraction must lie in [0, 1]");
    }
    const double t = 1.0 - loss_fraction;
    const SymMat2& c = state.cov();
    SymMat2 out{t * c.xx + loss_fraction, t * c.xp, t * c.pp + loss_fraction};
    const double amp = std::sqrt(t);
    Vec2 mean{amp * state.mean().x, amp * state.mean().p};
    return GaussianState(mean, out);
}

GaussianState add_isotropic_noise(const GaussianState& state, double n) {
    require_finite(n, "isotropic noise");
    if (n < 0.0) {
        throw InvalidParameter("isotropic noise must be non-negative");
    }
    const SymMat2& c = state.cov();
    return GaussianState(state.mean(), SymMat2{c.xx + n, c.xp, c.pp + n});
}

double variance_at(const GaussianState& state, QuadratureAngle chi) {
    const double c = std::cos(chi.rad);
    const double s = std::sin(chi.rad);
    const SymMat2& m = state.cov();
    // (cos chi, -sin chi) . cov . (cos chi, -sin chi)
    return c * c * m.xx - 2.0 * c * s * m.xp + s * s * m.pp;
}

VarianceExtrema min_max_variance(const GaussianState& state) {
    const SymMat2& c = state.cov();
    const double mid = 0.5 * (c.xx + c.pp);
    const double half_gap = 0.5 * (c.xx - c.pp);
    const double radius = std::hypot(half_gap, c.xp);

    VarianceExtrema out;
    out.v_min = mid - radius;
    out.v_max = mid + radius;

    if (radius == 0.0) {
        out.chi_min = 0.0;  // isotropic: tie broken to 0
        return out;
    }
    double chi;
    if (c.xp == 0.0) {
        chi = (c.xx <= c.pp) ? 0.0 : std::numbers::pi / 2.0;
    } else {
        // Eigenvector of the minimal eigenvalue, read back through the
        // measurement direction (cos chi, -sin chi).
        const double v1 = c.xp;
        const double v2 = out.v_min - c.xx;
        chi = std::atan2(-v2, v1);
    }
    chi = std::fmod(chi, std::numbers::pi);
    if (chi < 0.0) {
        chi += std::numbers::pi;
    }
    if (chi >= std::numbers::pi) {
        chi = 0.0;
    }
    out.chi_min = chi;
    return out;
}

double to_db(double relative_variance) {
    if (!std::isfinite(relative_variance) || relative_variance <= 0.0) {
        throw InvalidParameter("relative variance must be positive");
    }
    return 10.0 * std::log10(relative_variance);
}

WignerGrid wigner_grid(const GaussianState& state, double x_min, double x_max, double p_min,
                       double p_max, std::size_t n_points, Exec exec) {
    require_finite(x_min, "x_min");
    require_finite(x_max, "x_max");
    require_finite(p_min, "p_min");
    require_finite(p_max, "p_max");
    if (n_points < 2) {
        throw InvalidParameter("wigner grid needs at least 2 points per axis");
    }
    const SymMat2& c = state.cov();
    const double det = c.det();
    if (det < 1e-12) {
        throw DegenerateState("covariance determinant below 1e-12");
    }
    const double inv_xx = c.pp / det;
    const double inv_xp = -c.xp / det;
    const double inv_pp = c.xx / det;
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));

    WignerGrid grid;
    grid.xs.resize(n_points);
    grid.ps.resize(n_points);
    const double dx = (x_max - x_min) / static_cast<double>(n_points - 1);
    const double dp = (p_max - p_min) / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        grid.xs[i] = x_min + static_cast<double>(i) * dx;
        grid.ps[i] = p_min + static_cast<double>(i) * dp;
    }
    grid.values.resize(n_points * n_points);

    const double mx = state.mean().x;
    const double mp = state.mean().p;
    parallel_for(n_points, exec, [&](std::size_t ix) {
        const double rx = grid.xs[ix] - mx;
        for (std::size_t ip = 0; ip < n_points; ++ip) {
            const double rp = grid.ps[ip] - mp;
            const double q = rx * (inv_xx * rx + inv_xp * rp) + rp * (inv_xp * rx + inv_pp * rp);
            grid.values[ix * n_points + ip] = norm * std::exp(-0.5 * q);
        }
    });
    return grid;
}

}  // namespace sqz
