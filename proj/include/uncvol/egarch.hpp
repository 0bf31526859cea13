#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "uncvol/diagnostics.hpp"
#include "uncvol/regression.hpp"
#include "uncvol/series.hpp"

namespace uncvol {

/// One exogenous regressor: a labeled series entering at a fixed lag, with
/// the coefficient name used in reports (eta, tau, lambda, ...).
struct ExoTerm {
    std::string series_label;
    int lag = 1;
    std::string coeff_label;
};

/// Declarative mean-equation specification. Own lags carry a_i/b_i, cross
/// lags carry rho_i/delta_i.
struct MeanSpec {
    std::vector<int> own_lags;
    std::vector<int> cross_lags;
    std::vector<ExoTerm> exogenous;
    bool include_intercept = true;

    int max_lag() const;
    void validate() const;  // throws on empty spec or non-positive lags
};

struct EgarchParams {
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

/// One step of the log-variance recursion shared by estimator and simulator:
/// log h_t = alpha0 + alpha1 log h_{t-1} + beta |eps/sqrt(h)| + gamma eps/sqrt(h).
double egarch_step(const EgarchParams& p, double h_prev, double eps_prev);

/// Full conditional-variance path; h_1 = h0, recursion from t = 2.
/// Throws NumericalFailure naming the index on exp overflow.
std::vector<double> egarch_recursion(const EgarchParams& p, std::span<const double> residuals,
                                     double h0);

/// Aligned estimation sample for one mean equation.
struct MeanData {
    std::vector<double> y;
    DesignMatrix X;
    YearMonth start;  // calendar stamp of y[0]
    std::string dep_name;
};

/// Builds the regression sample for a mean equation: dependent series, the
/// cross series for rho/delta lags, and exogenous series keyed by label.
/// The sample is the largest calendar range on which every regressor exists.
MeanData build_mean_data(const Series& dep, const Series* cross,
                         const std::map<std::string, const Series*>& exo, const MeanSpec& spec,
                         const std::string& own_prefix = "a", const std::string& cross_prefix = "rho");

/// Gaussian negative log-likelihood of the AR-X mean equation with EGARCH(1,1)
/// errors. h0 <= 0 selects the model-implied unconditional variance
/// exp(alpha0/(1-alpha1)) (exp(alpha0) when |alpha1| >= 1).
double negative_log_likelihood(std::span<const double> mean_coeffs, const EgarchParams& vp,
                               const MeanData& data, double h0 = -1.0);

struct Coefficient {
    std::string label;
    double value = 0.0;
    double std_error = 0.0;
    double z_stat = 0.0;
    char star = ' ';  // 'a'/'b'/'c' = 1/5/10%, ' ' = insignificant
};

struct EgarchFit {
    std::vector<Coefficient> mean_coefficients;
    EgarchParams variance_params;
    std::vector<Coefficient> variance_coefficients;  // alpha0, alpha1, beta, gamma
    Series h_path;
    Series std_residuals;
    double log_likelihood = 0.0;
    double r_squared = 0.0;
    double f_statistic = 0.0;
    TestStat q12;      // Ljung-Box on standardized residuals
    TestStat q1_sq;    // order-1 Q on squared standardized residuals
    TestStat q12_sq;   // order-12 Q on squared standardized residuals
    bool converged = false;
    bool se_reliable = false;        // Hessian positive definite at optimum
    bool variance_stationary = false;  // |alpha1| < 1
    int n_obs = 0;
};

struct EgarchOptions {
    bool robust_se = false;  // QMLE sandwich instead of inverse Hessian
    int q_order = 12;
    int max_iter = 500;
};

/// Joint QMLE of mean and variance parameters for an arbitrary mean equation.
EgarchFit fit_ar_egarch(const MeanData& data, const EgarchOptions& opts = {});

/// Inflation equation: pi on own lags (a_i), output-growth lags (rho_i), and
/// interest-rate/oil exogenous terms (eta, tau), with EGARCH(1,1) errors.
EgarchFit fit_inflation_model(const Series& pi, const Series& y, const Series& interest,
                              const Series& oil, const MeanSpec& spec,
                              const EgarchOptions& opts = {});

/// Output-growth equation: y on own lags (b_i), inflation lags (delta_i), and
/// the EU output term (lambda), with EGARCH(1,1) errors.
EgarchFit fit_output_model(const Series& y, const Series& pi, const Series& y_eu,
                           const MeanSpec& spec, const EgarchOptions& opts = {});

/// Conditional-variance path relabeled as the uncertainty series.
Series extract_uncertainty(const EgarchFit& fit, const std::string& name);

char significance_star(double p_value);

}  // namespace uncvol
