#pragma once

#include <span>
#include <vector>

namespace uncvol {

enum class RefDist { chi_square, f_dist, dickey_fuller };

struct TestStat {
    double statistic = 0.0;
    RefDist distribution = RefDist::chi_square;
    int dof1 = 0;
    int dof2 = 0;  // second F dof; unused for chi-square
    double p_value = 1.0;
    bool sig1 = false;
    bool sig5 = false;
    bool sig10 = false;
    bool degenerate = false;  // e.g. zero-variance input
};

/// Sample autocorrelations rho_1..rho_k (mean-subtracted, lag-0 normalized).
std::vector<double> autocorrelations(std::span<const double> x, int k);

/// Ljung-Box Q(k) = n(n+2) sum_j rho_j^2/(n-j), chi-square with
/// k - dof_reduction dof.
TestStat ljung_box(std::span<const double> x, int k, int dof_reduction = 0);

/// McLeod-Li form: Ljung-Box on the squared, mean-centered sequence.
TestStat squared_residual_q(std::span<const double> x, int k);

/// Engle's LM test: regress x^2 on q own lags + intercept; n*R^2 ~ chi2(q).
TestStat arch_lm(std::span<const double> x, int q);

}  // namespace uncvol
