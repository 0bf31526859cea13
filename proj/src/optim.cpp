#include "uncvol/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uncvol/errors.hpp"

namespace uncvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Eigen::VectorXd& x) {
    const double v = f(x);
    return std::isfinite(v) ? v : kInf;
}

struct SimplexPoint {
    Eigen::VectorXd x;
    double f;
};

// Standard Nelder-Mead; returns the best vertex found.
SimplexPoint nelder_mead(const Objective& f, const Eigen::VectorXd& x0, int max_iter,
                         double scale) {
    const int n = static_cast<int>(x0.size());
    std::vector<SimplexPoint> s;
    s.reserve(n + 1);
    s.push_back({x0, safe_eval(f, x0)});
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd xi = x0;
        const double h = scale * std::max(1.0, std::fabs(x0[i]));
        xi[i] += h;
        s.push_back({xi, safe_eval(f, xi)});
    }
    auto by_f = [](const SimplexPoint& a, const SimplexPoint& b) { return a.f < b.f; };
    std::sort(s.begin(), s.end(), by_f);

    for (int it = 0; it < max_iter; ++it) {
        if (std::isfinite(s[0].f) && std::isfinite(s[n].f) &&
            s[n].f - s[0].f < 1e-10 * (1.0 + std::fabs(s[0].f)))
            break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += s[i].x;
        centroid /= static_cast<double>(n);

        Eigen::VectorXd xr = centroid + (centroid - s[n].x);
        double fr = safe_eval(f, xr);
        if (fr < s[0].f) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - s[n].x);
            double fe = safe_eval(f, xe);
            s[n] = fe < fr ? SimplexPoint{xe, fe} : SimplexPoint{xr, fr};
        } else if (fr < s[n - 1].f) {
            s[n] = {xr, fr};
        } else {
            Eigen::VectorXd xc = centroid + 0.5 * (s[n].x - centroid);
            double fc = safe_eval(f, xc);
            if (fc < s[n].f) {
                s[n] = {xc, fc};
            } else {
                for (int i = 1; i <= n; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].f = safe_eval(f, s[i].x);
                }
            }
        }
        std::sort(s.begin(), s.end(), by_f);
    }
    return s[0];
}

}  // namespace

Eigen::VectorXd numerical_gradient(const Objective& f, const Eigen::VectorXd& x, double h_abs) {
    const int n = static_cast<int>(x.size());
    Eigen::VectorXd g(n);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < n; ++i) {
        const double h = std::max(h_abs, h_abs * std::fabs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Eigen::MatrixXd numerical_hessian(const Objective& f, const Eigen::VectorXd& x, double h) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd H(n, n);
    Eigen::VectorXd xp = x;
    const double f0 = f(x);
    std::vector<double> step(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) step[static_cast<std::size_t>(i)] = h * std::max(1.0, std::fabs(x[i]));

    for (int i = 0; i < n; ++i) {
        const double hi = step[static_cast<std::size_t>(i)];
        xp[i] = x[i] + hi;
        const double fpp = f(xp);
        xp[i] = x[i] - hi;
        const double fmm = f(xp);
        xp[i] = x[i];
        H(i, i) = (fpp - 2.0 * f0 + fmm) / (hi * hi);
        for (int j = i + 1; j < n; ++j) {
            const double hj = step[static_cast<std::size_t>(j)];
            xp[i] = x[i] + hi;
            xp[j] = x[j] + hj;
            const double fa = f(xp);
            xp[j] = x[j] - hj;
            const double fb = f(xp);
            xp[i] = x[i] - hi;
            const double fd = f(xp);
            xp[j] = x[j] + hj;
            const double fc = f(xp);
            xp[i] = x[i];
            xp[j] = x[j];
            H(i, j) = H(j, i) = (fa - fb - fc + fd) / (4.0 * hi * hj);
        }
    }
    return 0.5 * (H + H.transpose());
}

OptimResult minimize(const Objective& f, const Eigen::VectorXd& x0, const OptimOptions& opts) {
    OptimResult result;
    const double f0 = f(x0);
    if (!std::isfinite(f0)) {
        result.x_min = x0;
        result.f_min = f0;
        result.reason = Termination::numerical_failure;
        return result;
    }

    // Stage 1: simplex polish of the start.
    SimplexPoint best = nelder_mead(f, x0, opts.simplex_max_iter, opts.simplex_scale);
    if (!std::isfinite(best.f) || best.f > f0) best = {x0, f0};

    // Stage 2: BFGS with finite-difference gradients.
    const int n = static_cast<int>(x0.size());
    Eigen::VectorXd x = best.x;
    double fx = best.f;
    Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd g = numerical_gradient(f, x);
    int it = 0;
    result.reason = Termination::max_iter;
    for (; it < opts.max_iter; ++it) {
        if (!g.allFinite()) {
            result.reason = Termination::numerical_failure;
            break;
        }
        // Tolerance scaled by the objective magnitude: finite-difference
        // gradients carry roundoff noise proportional to |f|.
        if (g.lpNorm<Eigen::Infinity>() < opts.grad_tol * (1.0 + std::fabs(fx))) {
            result.converged = true;
            result.reason = Termination::gradient_tol;
            break;
        }
        Eigen::VectorXd dir = -(Hinv * g);
        double slope = g.dot(dir);
        if (slope >= 0.0) {  // reset on loss of descent direction
            Hinv = Eigen::MatrixXd::Identity(n, n);
            dir = -g;
            slope = g.dot(dir);
        }

        // Backtracking Armijo line search; non-finite trial points backtrack
        // too. The first trial step is capped relative to the current point so
        // cliff-sized gradients cannot exhaust the backtracking budget.
        double alpha = 1.0;
        const double dir_norm = dir.norm();
        const double max_step = 10.0 * (1.0 + x.norm());
        if (dir_norm > max_step) alpha = max_step / dir_norm;
        double f_new = kInf;
        Eigen::VectorXd x_new;
        bool ok = false;
        for (int ls = 0; ls < 80; ++ls) {
            x_new = x + alpha * dir;
            f_new = safe_eval(f, x_new);
            if (f_new <= fx + 1e-4 * alpha * slope) {
                ok = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!ok) {
            // No acceptable step along this direction; treat as converged to
            // line-search resolution.
            result.converged =
                g.lpNorm<Eigen::Infinity>() < 10.0 * opts.grad_tol * (1.0 + std::fabs(fx));
            result.reason = Termination::step_tol;
            break;
        }

        Eigen::VectorXd step = x_new - x;
        if (step.norm() < opts.step_tol * (1.0 + x.norm())) {
            x = x_new;
            fx = f_new;
            result.converged = true;
            result.reason = Termination::step_tol;
            break;
        }
        Eigen::VectorXd g_new = numerical_gradient(f, x_new);
        if (g_new.allFinite()) {
            Eigen::VectorXd yk = g_new - g;
            const double sy = step.dot(yk);
            if (sy > 1e-12 * step.norm() * yk.norm()) {
                const double rho = 1.0 / sy;
                Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
                Hinv = (I - rho * step * yk.transpose()) * Hinv *
                           (I - rho * yk * step.transpose()) +
                       rho * step * step.transpose();
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }

    if (fx <= best.f) {
        result.x_min = x;
        result.f_min = fx;
    } else {
        result.x_min = best.x;
        result.f_min = best.f;
    }
    result.iterations = it;
    if (result.converged && result.f_min > f0) result.converged = false;
    return result;
}

}  // namespace uncvol
