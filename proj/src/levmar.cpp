#include "sqz/levmar.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sqz/errors.hpp"

namespace sqz {

namespace {

// Cholesky solve of the (n x n, row-major) system A x = b; returns false if
// A is not positive definite.
bool cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n,
                    std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= a[j * n + k] * a[j * n + k];
        }
        if (!(d > 0.0)) {
            return false;
        }
        a[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / a[j * n + j];
        }
    }
    // forward substitution L y = b
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            s -= a[i * n + k] * b[k];
        }
        b[i] = s / a[i * n + i];
    }
    // back substitution L^T x = y
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) {
            s -= a[k * n + ii] * x[k];
        }
        x[ii] = s / a[ii * n + ii];
    }
    return true;
}

// Inverse of a symmetric positive definite matrix. Unlike the damped step
// solve above, this refuses matrices that are singular to working precision:
// finite-difference noise can push an exactly rank-deficient J^T J a hair
// above zero, and inverting it would report absurdly confident errors for
// parameters the data cannot actually distinguish.
bool spd_inverse(std::vector<double> a, std::size_t n, std::vector<double>& inv) {
    double max_diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        max_diag = std::max(max_diag, a[j * n + j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            d -= a[j * n + k] * a[j * n + k];
        }
        if (!(d > 1e-12 * max_diag)) {
            return false;
        }
        a[j * n + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / a[j * n + j];
        }
    }
    inv.assign(n * n, 0.0);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = col[i];
            for (std::size_t k = 0; k < i; ++k) {
                s -= a[i * n + k] * col[k];
            }
            col[i] = s / a[i * n + i];
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = col[ii];
            for (std::size_t k = ii + 1; k < n; ++k) {
                s -= a[k * n + ii] * col[k];
            }
            col[ii] = s / a[ii * n + ii];
        }
        for (std::size_t i = 0; i < n; ++i) {
            inv[i * n + j] = col[i];
        }
    }
    return true;
}

double clamp_to_box(double v, double lo, double hi) {
    return std::min(std::max(v, lo), hi);
}

}  // namespace

LevMarResult levmar_fit(const ResidualFn& residuals, std::span<const double> initial,
                        std::span<const double> lower, std::span<const double> upper,
                        std::size_t n_residuals, const LevMarOptions& options) {
    const std::size_t n = initial.size();
    const std::size_t m = n_residuals;
    if (n == 0 || m == 0) {
        throw InvalidParameter("fit needs at least one parameter and one residual");
    }
    if (lower.size() != n || upper.size() != n) {
        throw InvalidParameter("bound vectors must match the parameter count");
    }

    std::vector<double> params(initial.begin(), initial.end());
    for (std::size_t i = 0; i < n; ++i) {
        params[i] = clamp_to_box(params[i], lower[i], upper[i]);
    }

    std::vector<double> r(m), r_trial(m), jac(m * n), jtj(n * n), jtr(n), damped(n * n);
    std::vector<double> step, trial(n);

    auto eval_cost = [&](const std::vector<double>& p, std::vector<double>& out) {
        residuals(p, out);
        double c = 0.0;
        for (double v : out) {
            c += v * v;
        }
        return c;
    };

    double cost = eval_cost(params, r);
    double lambda = options.initial_lambda;
    LevMarResult result;
    result.converged = false;

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        // forward-difference Jacobian, stepping away from active bounds
        for (std::size_t j = 0; j < n; ++j) {
            const double h0 = std::max(1e-7 * std::abs(params[j]), 1e-9);
            double h = (params[j] + h0 <= upper[j]) ? h0 : -h0;
            std::vector<double> p = params;
            p[j] = clamp_to_box(params[j] + h, lower[j], upper[j]);
            h = p[j] - params[j];
            if (h == 0.0) {
                for (std::size_t i = 0; i < m; ++i) {
                    jac[i * n + j] = 0.0;
                }
                continue;
            }
            residuals(p, r_trial);
            for (std::size_t i = 0; i < m; ++i) {
                jac[i * n + j] = (r_trial[i] - r[i]) / h;
            }
        }

        // normal equations
        std::fill(jtj.begin(), jtj.end(), 0.0);
        std::fill(jtr.begin(), jtr.end(), 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t a = 0; a < n; ++a) {
                const double ja = jac[i * n + a];
                jtr[a] += ja * r[i];
                for (std::size_t b = a; b < n; ++b) {
                    jtj[a * n + b] += ja * jac[i * n + b];
                }
            }
        }
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < a; ++b) {
                jtj[a * n + b] = jtj[b * n + a];
            }
        }

        double grad_inf = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            grad_inf = std::max(grad_inf, std::abs(2.0 * jtr[a]));
        }
        if (grad_inf <= options.grad_tol) {
            result.converged = true;
            break;
        }

        // damped trial steps; grow lambda until the cost drops
        bool improved = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            damped = jtj;
            for (std::size_t a = 0; a < n; ++a) {
                const double d = std::max(jtj[a * n + a], 1e-12);
                damped[a * n + a] = jtj[a * n + a] + lambda * d;
            }
            std::vector<double> rhs(n);
            for (std::size_t a = 0; a < n; ++a) {
                rhs[a] = -jtr[a];
            }
            if (!cholesky_solve(damped, rhs, n, step)) {
                lambda *= 10.0;
                continue;
            }
            for (std::size_t a = 0; a < n; ++a) {
                trial[a] = clamp_to_box(params[a] + step[a], lower[a], upper[a]);
            }
            const double trial_cost = eval_cost(trial, r_trial);
            if (trial_cost < cost) {
                const double rel_drop = (cost - trial_cost) / std::max(cost, DBL_MIN);
                params = trial;
                std::swap(r, r_trial);
                cost = trial_cost;
                lambda = std::max(lambda / 3.0, 1e-12);
                improved = true;
                if (rel_drop < options.cost_rel_tol) {
                    result.converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!improved) {
            // no descent direction left at any damping: treat as stationary
            result.converged = true;
            break;
        }
        if (result.converged) {
            ++iter;
            break;
        }
    }

    result.params = params;
    result.cost = cost;
    result.iterations = iter;

    // linearized covariance at the final point
    result.covariance_diag.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double h0 = std::max(1e-7 * std::abs(params[j]), 1e-9);
        double h = (params[j] + h0 <= upper[j]) ? h0 : -h0;
        std::vector<double> p = params;
        p[j] = clamp_to_box(params[j] + h, lower[j], upper[j]);
        h = p[j] - params[j];
        residuals(p, r_trial);
        for (std::size_t i = 0; i < m; ++i) {
            jac[i * n + j] = (h != 0.0) ? (r_trial[i] - r[i]) / h : 0.0;
        }
    }
    std::fill(jtj.begin(), jtj.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a; b < n; ++b) {
                jtj[a * n + b] += jac[i * n + a] * jac[i * n + b];
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            jtj[a * n + b] = jtj[b * n + a];
        }
    }
    std::vector<double> inv;
    if (m > n && spd_inverse(jtj, n, inv)) {
        const double s2 = std::max(cost, DBL_MIN) / static_cast<double>(m - n);
        for (std::size_t a = 0; a < n; ++a) {
            result.covariance_diag[a] = std::max(s2 * inv[a * n + a], DBL_MIN);
        }
    } else {
        result.covariance_diag.assign(n, std::numeric_limits<double>::quiet_NaN());
    }
    return result;
}

}  // namespace sqz
