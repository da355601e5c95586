#pragma once

#include <cstddef>
#include <vector>

#include "sqz/parallel.hpp"

namespace sqz {

struct Vec2 {
    double x = 0.0;
    double p = 0.0;
};

// Symmetric 2x2 matrix; symmetry holds by construction (only one
// off-diagonal element is stored).
struct SymMat2 {
    double xx = 1.0;
    double xp = 0.0;
    double pp = 1.0;

    double det() const { return xx * pp - xp * xp; }
    double trace() const { return xx + pp; }
};

// Local-oscillator phase in radians. Any real value is accepted;
// quadrature statistics are pi-periodic in it.
struct QuadratureAngle {
    double rad = 0.0;
    constexpr QuadratureAngle(double r = 0.0) : rad(r) {}
};

// Single-mode Gaussian state of the probe quadratures (X, P).
//
// Units: vacuum quadrature variance is 1, i.e. all covariances are
// relative to the standard quantum limit. The quadrature measured at LO
// phase chi is c . (X, P) with c = (cos chi, -sin chi); this sign
// convention makes a positive shear strength squeeze the chi in (0, pi/2)
// quadratures, matching the phase-dependent noise formula used throughout.
class GaussianState {
public:
    // Vacuum: zero mean, identity covariance.
    GaussianState() = default;

    // Validates: finite entries, positive definite covariance.
    GaussianState(const Vec2& mean, const SymMat2& cov);

    const Vec2& mean() const { return mean_; }
    const SymMat2& cov() const { return cov_; }

private:
    Vec2 mean_{};
    SymMat2 cov_{};
};

GaussianState vacuum();

// Phase-space shear X -> X + s P, P -> P. Symplectic: preserves det(cov).
GaussianState shear(const GaussianState& state, double strength);

// Counterclockwise rotation of the quadrature plane by theta.
GaussianState rotate(const GaussianState& state, double theta);

// Beam-splitter admixture of vacuum: cov -> (1-f) cov + f I,
// mean -> sqrt(1-f) mean, with loss fraction f in [0, 1].
GaussianState apply_loss(const GaussianState& state, double loss_fraction);

// Phase-insensitive noise: cov -> cov + n I, n >= 0.
GaussianState add_isotropic_noise(const GaussianState& state, double n);

// Variance of the quadrature selected by LO phase chi, in SQL units.
double variance_at(const GaussianState& state, QuadratureAngle chi);

struct VarianceExtrema {
    double v_min = 1.0;
    double v_max = 1.0;
    double chi_min = 0.0;  // in [0, pi); 0 for isotropic states
};

// Eigenvalues of the covariance plus an angle attaining the minimum
// under the variance_at convention.
VarianceExtrema min_max_variance(const GaussianState& state);

// 10 log10 of a variance relative to SQL; negative means squeezing.
double to_db(double relative_variance);

// Wigner density W(x, p) on a rectangular grid. Row-major with x as the
// slow index: value(ix, ip) = values[ix * n + ip].
struct WignerGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    std::vector<double> values;

    std::size_t n() const { return xs.size(); }
    double at(std::size_t ix, std::size_t ip) const { return values[ix * ps.size() + ip]; }
};

WignerGrid wigner_grid(const GaussianState& state, double x_min, double x_max, double p_min,
                       double p_max, std::size_t n_points, Exec exec = Exec::parallel);

}  // namespace sqz
