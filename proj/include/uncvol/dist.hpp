#pragma once

namespace uncvol {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

/// CDF of the chi-square distribution with dof degrees of freedom.
double chi_square_cdf(double x, int dof);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, int d1, int d2);

double normal_cdf(double z);

/// Inverse standard-normal CDF (Wichura's AS 241, ~1e-15 absolute accuracy).
double normal_quantile(double p);

}  // namespace uncvol
