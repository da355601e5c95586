#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sqz {

// Small dense Levenberg-Marquardt solver with box constraints and a
// forward-difference Jacobian. Sized for the handful-of-parameters fits in
// this project; cost is sum of squared residuals.
struct LevMarOptions {
    int max_iterations = 200;
    double cost_rel_tol = 1e-10;   // stop when the relative cost decrease drops below this
    double grad_tol = 1e-8;        // or when the gradient inf-norm does
    double initial_lambda = 1e-3;
};

struct LevMarResult {
    std::vector<double> params;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    // Diagonal of s^2 (J^T J)^-1 at the optimum, s^2 = cost / (m - n).
    std::vector<double> covariance_diag;
};

using ResidualFn = std::function<void(std::span<const double>, std::span<double>)>;

LevMarResult levmar_fit(const ResidualFn& residuals, std::span<const double> initial,
                        std::span<const double> lower, std::span<const double> upper,
                        std::size_t n_residuals, const LevMarOptions& options = {});

}  // namespace sqz
