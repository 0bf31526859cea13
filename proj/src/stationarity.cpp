#include "uncvol/stationarity.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "uncvol/errors.hpp"
#include "uncvol/regression.hpp"

namespace uncvol {

namespace {

// Dickey-Fuller critical values (Fuller 1976 / MacKinnon-style finite-sample
// tables), interpolated linearly in effective T. Rows: T grid; columns 1/5/10%.
constexpr std::array<int, 6> kTGrid = {25, 50, 100, 250, 500, 100000};

constexpr double kCvNone[6][3] = {
    {-2.66, -1.95, -1.60}, {-2.62, -1.95, -1.61}, {-2.60, -1.95, -1.61},
    {-2.58, -1.95, -1.62}, {-2.58, -1.95, -1.62}, {-2.58, -1.95, -1.62}};
constexpr double kCvConst[6][3] = {
    {-3.75, -3.00, -2.63}, {-3.58, -2.93, -2.60}, {-3.51, -2.89, -2.58},
    {-3.46, -2.88, -2.57}, {-3.44, -2.87, -2.57}, {-3.43, -2.86, -2.57}};
constexpr double kCvTrend[6][3] = {
    {-4.38, -3.60, -3.24}, {-4.15, -3.50, -3.18}, {-4.04, -3.45, -3.15},
    {-3.99, -3.43, -3.13}, {-3.98, -3.42, -3.13}, {-3.96, -3.41, -3.12}};

void attach_critical_values(UnitRootResult& r, DetSpec spec, int t_eff) {
    const double (*table)[3] = spec == DetSpec::none      ? kCvNone
                               : spec == DetSpec::constant ? kCvConst
                                                           : kCvTrend;
    std::size_t hi = 1;
    while (hi < kTGrid.size() - 1 && kTGrid[hi] < t_eff) ++hi;
    const std::size_t lo = hi - 1;
    const double w = std::clamp(
        (static_cast<double>(t_eff) - kTGrid[lo]) / static_cast<double>(kTGrid[hi] - kTGrid[lo]),
        0.0, 1.0);
    r.cv1 = (1.0 - w) * table[lo][0] + w * table[hi][0];
    r.cv5 = (1.0 - w) * table[lo][1] + w * table[hi][1];
    r.cv10 = (1.0 - w) * table[lo][2] + w * table[hi][2];
    r.reject1 = r.statistic < r.cv1;
    r.reject5 = r.statistic < r.cv5;
    r.reject10 = r.statistic < r.cv10;
}

void add_deterministics(DesignMatrix& X, DetSpec spec, int m) {
    if (spec != DetSpec::none)
        X.add_column("const", std::vector<double>(static_cast<std::size_t>(m), 1.0));
    if (spec == DetSpec::constant_trend) {
        std::vector<double> trend(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) trend[static_cast<std::size_t>(t)] = t + 1.0;
        X.add_column("trend", std::move(trend));
    }
}

// Dickey-Fuller regression with p augmentation lags, dropping `drop` leading
// differenced observations (drop >= p keeps samples comparable across p).
// Returns the fit plus the index of the level coefficient.
struct DfRegression {
    OlsFit fit;
    std::size_t level_idx;
    double level_coeff;
    double level_se;
};

DfRegression df_regression(const Series& s, DetSpec spec, int p, int drop) {
    const int n = static_cast<int>(s.size());
    std::vector<double> dy(static_cast<std::size_t>(n - 1));
    for (int t = 1; t < n; ++t) dy[static_cast<std::size_t>(t - 1)] = s[static_cast<std::size_t>(t)] - s[static_cast<std::size_t>(t - 1)];

    const int m = n - 1 - drop;  // usable rows
    if (m <= p + 3) throw SizeError("adf: effective sample too small after lagging");

    DesignMatrix X;
    add_deterministics(X, spec, m);
    const std::size_t level_idx = X.n_cols();
    std::vector<double> level(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) level[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t + drop)];
    X.add_column("level", std::move(level));
    for (int j = 1; j <= p; ++j) {
        std::vector<double> col(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) col[static_cast<std::size_t>(t)] = dy[static_cast<std::size_t>(t + drop - j)];
        X.add_column("dlag" + std::to_string(j), std::move(col));
    }
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) y[static_cast<std::size_t>(t)] = dy[static_cast<std::size_t>(t + drop)];

    DfRegression out{ols_fit(y, X), level_idx, 0.0, 0.0};
    out.level_coeff = out.fit.coefficients[level_idx];
    out.level_se = out.fit.std_errors[level_idx];
    return out;
}

}  // namespace

UnitRootResult adf_test(const Series& s, DetSpec spec, int max_lags) {
    const int n = static_cast<int>(s.size());
    if (max_lags < 0) throw SizeError("adf_test: max_lags must be >= 0");
    if (n < max_lags + 10) throw SizeError("adf_test: series too short for max_lags");

    // Lag choice by AIC over a common sample (all candidates drop max_lags
    // leading differenced observations).
    int best_p = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= max_lags; ++p) {
        const DfRegression reg = df_regression(s, spec, p, max_lags);
        const auto ic = information_criteria(reg.fit.log_likelihood, reg.fit.n_params, reg.fit.n_obs);
        if (ic.aic < best_aic) {
            best_aic = ic.aic;
            best_p = p;
        }
    }

    const DfRegression reg = df_regression(s, spec, best_p, best_p);
    UnitRootResult r;
    if (reg.level_se <= 0.0) throw SingularityError("adf_test: degenerate level regressor");
    r.statistic = reg.level_coeff / reg.level_se;
    r.lags_or_bandwidth = best_p;
    r.spec = spec;
    r.effective_obs = reg.fit.n_obs;
    attach_critical_values(r, spec, r.effective_obs);
    return r;
}

UnitRootResult pp_test(const Series& s, DetSpec spec, int bandwidth) {
    const int n = static_cast<int>(s.size());
    if (n < 20) throw SizeError("pp_test: series too short");

    const DfRegression reg = df_regression(s, spec, 0, 0);
    if (reg.level_se <= 0.0) throw SingularityError("pp_test: degenerate level regressor");
    const int m = reg.fit.n_obs;
    if (bandwidth < 0)
        bandwidth = static_cast<int>(std::floor(4.0 * std::pow(m / 100.0, 2.0 / 9.0)));

    const auto& u = reg.fit.residuals;
    double gamma0 = 0.0;
    for (double v : u) gamma0 += v * v;
    gamma0 /= m;
    double lrv = gamma0;
    for (int j = 1; j <= bandwidth; ++j) {
        double gj = 0.0;
        for (int t = j; t < m; ++t) gj += u[static_cast<std::size_t>(t)] * u[static_cast<std::size_t>(t - j)];
        gj /= m;
        lrv += 2.0 * (1.0 - static_cast<double>(j) / (bandwidth + 1.0)) * gj;
    }
    if (lrv <= 0.0) lrv = gamma0;  // kernel can go nonpositive in tiny samples

    const double t_rho = reg.level_coeff / reg.level_se;
    const double s2 = reg.fit.rss / static_cast<double>(m - reg.fit.n_params);

    UnitRootResult r;
    // Z_t statistic with Bartlett long-run variance correction; collapses to
    // the DF t-ratio when bandwidth = 0.
    r.statistic = std::sqrt(gamma0 / lrv) * t_rho -
                  (lrv - gamma0) * m * reg.level_se / (2.0 * std::sqrt(lrv) * std::sqrt(s2));
    r.lags_or_bandwidth = bandwidth;
    r.spec = spec;
    r.effective_obs = m;
    attach_critical_values(r, spec, m);
    return r;
}

}  // namespace uncvol
