#pragma once

#include <span>
#include <string>
#include <vector>

#include "uncvol/series.hpp"

namespace uncvol {

/// Labeled regressor columns, all the same length.
class DesignMatrix {
public:
    DesignMatrix& add_column(std::string label, std::vector<double> values);
    /// Column of ones labeled "const". `n` sets the row count when the matrix
    /// is still empty; with columns present it must match (0 = infer).
    DesignMatrix& add_intercept(std::size_t n = 0);

    std::size_t n_rows() const { return columns_.empty() ? 0 : columns_[0].size(); }
    std::size_t n_cols() const { return columns_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& column(std::size_t j) const { return columns_[j]; }
    bool has_constant_column() const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<double>> columns_;
};

struct OlsFit {
    std::vector<std::string> labels;
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> residuals;
    std::vector<double> fitted;
    double rss = 0.0;
    double r_squared = 0.0;
    double log_likelihood = 0.0;  // Gaussian, concentrated sigma^2 = rss/n
    int n_obs = 0;
    int n_params = 0;
};

/// Least squares via column-pivoted Householder QR. Throws SingularityError
/// (naming a dependent column) on rank deficiency.
OlsFit ols_fit(std::span<const double> y, const DesignMatrix& X);

enum class Criterion { aic, sic };

/// Per-observation information criteria:
/// aic = -2 ll/n + 2 k/n, sic = -2 ll/n + k ln(n)/n.
struct InfoCriteria {
    double aic;
    double sic;
};
InfoCriteria information_criteria(double log_likelihood, int n_params, int n_obs);

/// AR order in [1, p_max] minimizing the criterion; all candidates are fit on
/// the common sample that drops the first p_max observations. Ties go to the
/// smaller order.
int select_ar_order(const Series& s, int p_max, Criterion criterion);

/// AR(p) with intercept: regress s[t] on 1, s[t-1..t-p].
OlsFit fit_ar(const Series& s, int p);

}  // namespace uncvol
