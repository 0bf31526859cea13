#pragma once

#include <Eigen/Dense>
#include <functional>

namespace uncvol {

using Objective = std::function<double(const Eigen::VectorXd&)>;

enum class Termination { gradient_tol, step_tol, max_iter, numerical_failure };

struct OptimOptions {
    double grad_tol = 1e-6;
    double step_tol = 1e-12;
    int max_iter = 500;           // quasi-Newton iterations
    int simplex_max_iter = 2000;  // Nelder-Mead stage
    double simplex_scale = 0.1;   // initial simplex edge, relative-ish
};

struct OptimResult {
    Eigen::VectorXd x_min;
    double f_min = 0.0;
    int iterations = 0;
    bool converged = false;
    Termination reason = Termination::max_iter;
};

/// Central-difference gradient, step max(h_abs, h_abs*|x_i|) per coordinate.
Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x,
                                   double h_abs = 1e-6);

/// Central-difference Hessian, symmetrized as (H + H')/2.
Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x,
                                  double h = 1e-4);

/// Two-stage unconstrained minimizer: Nelder-Mead simplex to escape poor
/// starts, then BFGS with finite-difference gradients and a backtracking line
/// search that retreats from non-finite regions.
OptimResult minimize(const Objective& f, const Eigen::VectorXd& x0,
                     const OptimOptions& opts = {});

}  // namespace uncvol
