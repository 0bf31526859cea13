#include "uncvol/regression.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>

#include "uncvol/errors.hpp"

namespace uncvol {

DesignMatrix& DesignMatrix::add_column(std::string label, std::vector<double> values) {
    if (!columns_.empty() && values.size() != columns_[0].size())
        throw SizeError("design column '" + label + "' length mismatch");
    labels_.push_back(std::move(label));
    columns_.push_back(std::move(values));
    return *this;
}

DesignMatrix& DesignMatrix::add_intercept(std::size_t n) {
    if (n == 0) n = n_rows();
    if (n == 0) throw SizeError("add_intercept: row count unknown on an empty matrix");
    return add_column("const", std::vector<double>(n, 1.0));
}

bool DesignMatrix::has_constant_column() const {
    for (const auto& col : columns_) {
        if (col.empty()) continue;
        bool constant = true;
        for (double v : col)
            if (v != col[0]) {
                constant = false;
                break;
            }
        if (constant && col[0] != 0.0) return true;
    }
    return false;
}

OlsFit ols_fit(std::span<const double> y, const DesignMatrix& X) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto k = static_cast<Eigen::Index>(X.n_cols());
    if (k == 0) throw SizeError("ols_fit: empty design matrix");
    if (static_cast<std::size_t>(n) != X.n_rows()) throw SizeError("ols_fit: y/X length mismatch");
    if (n <= k) throw SizeError("ols_fit: need more rows than columns");

    Eigen::MatrixXd M(n, k);
    for (Eigen::Index j = 0; j < k; ++j)
        M.col(j) = Eigen::Map<const Eigen::VectorXd>(X.column(j).data(), n);
    Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        // The permutation puts dependent columns last.
        const auto perm = qr.colsPermutation().indices();
        const auto bad = perm[k - 1];
        throw SingularityError("ols_fit: rank-deficient design, column '" +
                               X.labels()[static_cast<std::size_t>(bad)] + "' is dependent");
    }

    OlsFit fit;
    fit.labels = X.labels();
    Eigen::VectorXd beta = qr.solve(yv);
    Eigen::VectorXd fitted = M * beta;
    Eigen::VectorXd resid = yv - fitted;
    fit.coefficients.assign(beta.data(), beta.data() + k);
    fit.fitted.assign(fitted.data(), fitted.data() + n);
    fit.residuals.assign(resid.data(), resid.data() + n);
    fit.rss = resid.squaredNorm();
    fit.n_obs = static_cast<int>(n);
    fit.n_params = static_cast<int>(k);

    const double s2 = fit.rss / static_cast<double>(n - k);
    Eigen::MatrixXd xtx_inv =
        (M.transpose() * M).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    fit.std_errors.resize(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j)
        fit.std_errors[static_cast<std::size_t>(j)] = std::sqrt(std::max(0.0, s2 * xtx_inv(j, j)));

    double tss;
    if (X.has_constant_column()) {
        const double ybar = yv.mean();
        tss = (yv.array() - ybar).square().sum();
    } else {
        tss = yv.squaredNorm();
    }
    fit.r_squared = tss > 0.0 ? 1.0 - fit.rss / tss : 0.0;

    const double sigma2 = fit.rss / static_cast<double>(n);
    if (sigma2 <= 0.0) {
        fit.log_likelihood = std::numeric_limits<double>::infinity();
    } else {
        fit.log_likelihood =
            -0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi) + std::log(sigma2) + 1.0);
    }
    return fit;
}

InfoCriteria information_criteria(double log_likelihood, int n_params, int n_obs) {
    if (n_obs <= 0) throw SizeError("information_criteria: n_obs must be positive");
    const double n = n_obs;
    return {-2.0 * log_likelihood / n + 2.0 * n_params / n,
            -2.0 * log_likelihood / n + n_params * std::log(n) / n};
}

OlsFit fit_ar(const Series& s, int p) {
    const int n = static_cast<int>(s.size());
    if (n <= p + 1) throw SizeError("fit_ar: sample too small for order " + std::to_string(p));
    const int m = n - p;
    DesignMatrix X;
    X.add_column("const", std::vector<double>(m, 1.0));
    for (int lag = 1; lag <= p; ++lag) {
        std::vector<double> col(m);
        for (int t = 0; t < m; ++t) col[t] = s[static_cast<std::size_t>(t + p - lag)];
        X.add_column("lag" + std::to_string(lag), std::move(col));
    }
    std::vector<double> y(m);
    for (int t = 0; t < m; ++t) y[t] = s[static_cast<std::size_t>(t + p)];
    return ols_fit(y, X);
}

int select_ar_order(const Series& s, int p_max, Criterion criterion) {
    const int n = static_cast<int>(s.size());
    if (p_max < 1) throw SizeError("select_ar_order: p_max must be >= 1");
    if (n < p_max + 20) throw SizeError("select_ar_order: sample too small");

    // Common sample: every candidate drops the first p_max observations.
    const int m = n - p_max;
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) y[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t + p_max)];

    int best_p = 1;
    double best_crit = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= p_max; ++p) {
        DesignMatrix X;
        X.add_column("const", std::vector<double>(static_cast<std::size_t>(m), 1.0));
        for (int lag = 1; lag <= p; ++lag) {
            std::vector<double> col(static_cast<std::size_t>(m));
            for (int t = 0; t < m; ++t)
                col[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t + p_max - lag)];
            X.add_column("lag" + std::to_string(lag), std::move(col));
        }
        const OlsFit fit = ols_fit(y, X);
        const auto ic = information_criteria(fit.log_likelihood, fit.n_params, fit.n_obs);
        const double crit = criterion == Criterion::aic ? ic.aic : ic.sic;
        if (crit < best_crit) {
            best_crit = crit;
            best_p = p;
        }
    }
    return best_p;
}

}  // namespace uncvol
