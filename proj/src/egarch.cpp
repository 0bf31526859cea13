#include "uncvol/egarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/optim.hpp"

namespace uncvol {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
}  // namespace

int MeanSpec::max_lag() const {
    int m = 0;
    for (int l : own_lags) m = std::max(m, l);
    for (int l : cross_lags) m = std::max(m, l);
    for (const auto& e : exogenous) m = std::max(m, e.lag);
    return m;
}

void MeanSpec::validate() const {
    if (own_lags.empty() && cross_lags.empty() && exogenous.empty() && !include_intercept)
        throw SizeError("mean spec is empty");
    for (int l : own_lags)
        if (l < 1) throw DomainError("own lag must be >= 1");
    for (int l : cross_lags)
        if (l < 1) throw DomainError("cross lag must be >= 1");
    for (const auto& e : exogenous)
        if (e.lag < 0) throw DomainError("exogenous lag must be >= 0");
}

char significance_star(double p_value) {
    if (p_value < 0.01) return 'a';
    if (p_value < 0.05) return 'b';
    if (p_value < 0.10) return 'c';
    return ' ';
}

double egarch_step(const EgarchParams& p, double h_prev, double eps_prev) {
    const double z = eps_prev / std::sqrt(h_prev);
    const double log_h = p.alpha0 + p.alpha1 * std::log(h_prev) + p.beta * std::fabs(z) + p.gamma * z;
    return std::exp(log_h);
}

std::vector<double> egarch_recursion(const EgarchParams& p, std::span<const double> residuals,
                                     double h0) {
    if (residuals.empty()) throw SizeError("egarch_recursion: empty residuals");
    if (!(h0 > 0.0)) throw DomainError("egarch_recursion: h0 must be positive");
    std::vector<double> h(residuals.size());
    h[0] = h0;
    for (std::size_t t = 1; t < residuals.size(); ++t) {
        h[t] = egarch_step(p, h[t - 1], residuals[t - 1]);
        if (!std::isfinite(h[t]) || h[t] <= 0.0)
            throw NumericalFailure("egarch_recursion: overflow at index " + std::to_string(t));
    }
    return h;
}

MeanData build_mean_data(const Series& dep, const Series* cross,
                         const std::map<std::string, const Series*>& exo, const MeanSpec& spec,
                         const std::string& own_prefix, const std::string& cross_prefix) {
    spec.validate();
    if (!spec.cross_lags.empty() && cross == nullptr)
        throw SizeError("mean spec has cross lags but no cross series");

    // Feasible calendar window: each regressor must exist at t - lag.
    YearMonth first = dep.start().plus_months(spec.own_lags.empty() ? 0 : spec.max_lag());
    YearMonth last = dep.end();
    auto constrain = [&](const Series& s, int lag) {
        YearMonth lo = s.start().plus_months(lag);
        YearMonth hi = s.end().plus_months(lag);
        if (lo > first) first = lo;
        if (hi < last) last = hi;
    };
    for (int l : spec.own_lags) constrain(dep, l);
    for (int l : spec.cross_lags) constrain(*cross, l);
    for (const auto& e : spec.exogenous) {
        auto it = exo.find(e.series_label);
        if (it == exo.end() || it->second == nullptr)
            throw SizeError("exogenous series '" + e.series_label + "' not supplied");
        constrain(*it->second, e.lag);
    }
    const int m = last.months_since(first) + 1;
    if (m < 1)
        throw SizeError("no common sample for mean equation of '" + dep.name() + "'");

    MeanData data;
    data.start = first;
    data.dep_name = dep.name();
    data.y.resize(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) data.y[static_cast<std::size_t>(t)] = dep.at(first.plus_months(t));

    auto lagged = [&](const Series& s, int lag) {
        std::vector<double> col(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) col[static_cast<std::size_t>(t)] = s.at(first.plus_months(t - lag));
        return col;
    };
    if (spec.include_intercept)
        data.X.add_column(own_prefix + "0", std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int l : spec.own_lags) data.X.add_column(own_prefix + std::to_string(l), lagged(dep, l));
    for (int l : spec.cross_lags)
        data.X.add_column(cross_prefix + std::to_string(l), lagged(*cross, l));
    for (const auto& e : spec.exogenous)
        data.X.add_column(e.coeff_label, lagged(*exo.at(e.series_label), e.lag));
    return data;
}

namespace {

std::vector<double> mean_residuals(std::span<const double> coeffs, const MeanData& data) {
    const std::size_t n = data.y.size();
    const std::size_t k = data.X.n_cols();
    if (coeffs.size() != k) throw SizeError("coefficient count does not match design matrix");
    std::vector<double> eps(data.y.begin(), data.y.end());
    for (std::size_t j = 0; j < k; ++j) {
        const auto& col = data.X.column(j);
        for (std::size_t t = 0; t < n; ++t) eps[t] -= coeffs[j] * col[t];
    }
    return eps;
}

double default_h0(const EgarchParams& vp) {
    if (std::fabs(vp.alpha1) < 1.0) return std::exp(vp.alpha0 / (1.0 - vp.alpha1));
    return std::exp(vp.alpha0);
}

// Log-variance path with the recursion bounded to log(h0) +/- kLogHBand.
// The bound keeps the estimation objective finite and smooth everywhere:
// without it the optimizer can walk onto likelihood-degeneracy spikes
// (h_t -> 0 together with eps_t -> 0) whose neighborhoods overflow, leaving
// a non-finite gradient. A fit whose path actually touches the band is far
// outside any plausible variance scale for the data and will not converge
// cleanly anyway.
constexpr double kLogHBand = 30.0;

std::vector<double> bounded_log_variance_path(const EgarchParams& vp, std::span<const double> eps,
                                              double h0) {
    const double lh0 = std::log(h0);
    std::vector<double> lh(eps.size());
    lh[0] = lh0;
    for (std::size_t t = 1; t < eps.size(); ++t) {
        const double z = eps[t - 1] * std::exp(-0.5 * lh[t - 1]);
        const double next = vp.alpha0 + vp.alpha1 * lh[t - 1] + vp.beta * std::fabs(z) + vp.gamma * z;
        if (!std::isfinite(next)) throw NumericalFailure("non-finite log-variance recursion");
        lh[t] = std::clamp(next, lh0 - kLogHBand, lh0 + kLogHBand);
    }
    return lh;
}

std::vector<double> nll_contributions(std::span<const double> mean_coeffs, const EgarchParams& vp,
                                      const MeanData& data, double h0) {
    auto eps = mean_residuals(mean_coeffs, data);
    for (double e : eps)
        if (!std::isfinite(e)) throw NumericalFailure("non-finite mean residual");
    if (h0 <= 0.0) h0 = default_h0(vp);
    const auto lh = bounded_log_variance_path(vp, eps, h0);
    std::vector<double> out(eps.size());
    for (std::size_t t = 0; t < eps.size(); ++t)
        out[t] = 0.5 * (kLog2Pi + lh[t] + eps[t] * eps[t] * std::exp(-lh[t]));
    return out;
}

}  // namespace

double negative_log_likelihood(std::span<const double> mean_coeffs, const EgarchParams& vp,
                               const MeanData& data, double h0) {
    if (data.y.size() < 30) throw SizeError("effective sample must be >= 30");
    double nll = 0.0;
    for (double c : nll_contributions(mean_coeffs, vp, data, h0)) nll += c;
    return nll;
}

EgarchFit fit_ar_egarch(const MeanData& data, const EgarchOptions& opts) {
    const std::size_t k = data.X.n_cols();
    const std::size_t n = data.y.size();
    if (n < 30) throw SizeError("fit_ar_egarch: effective sample must be >= 30");

    const OlsFit ols = ols_fit(data.y, data.X);  // SingularityError on degenerate input
    const double s2 = ols.rss / static_cast<double>(n);
    if (s2 <= 0.0)
        throw SingularityError("fit_ar_egarch: zero residual variance, no identifiable model");

    // Parameter vector: mean coefficients, then alpha0, atanh(alpha1), beta, gamma.
    const std::size_t dim = k + 4;
    Eigen::VectorXd theta0(static_cast<Eigen::Index>(dim));
    for (std::size_t j = 0; j < k; ++j) theta0[static_cast<Eigen::Index>(j)] = ols.coefficients[j];
    theta0[static_cast<Eigen::Index>(k)] = std::log(s2);
    theta0[static_cast<Eigen::Index>(k + 1)] = std::atanh(0.5);
    theta0[static_cast<Eigen::Index>(k + 2)] = 0.1;
    theta0[static_cast<Eigen::Index>(k + 3)] = 0.0;

    auto unpack = [k](const Eigen::VectorXd& th) {
        std::vector<double> mc(k);
        for (std::size_t j = 0; j < k; ++j) mc[j] = th[static_cast<Eigen::Index>(j)];
        EgarchParams vp;
        vp.alpha0 = th[static_cast<Eigen::Index>(k)];
        vp.alpha1 = std::tanh(th[static_cast<Eigen::Index>(k + 1)]);
        vp.beta = th[static_cast<Eigen::Index>(k + 2)];
        vp.gamma = th[static_cast<Eigen::Index>(k + 3)];
        return std::pair(std::move(mc), vp);
    };

    const double h0 = s2;
    auto objective = [&](const Eigen::VectorXd& th) -> double {
        try {
            auto [mc, vp] = unpack(th);
            return negative_log_likelihood(mc, vp, data, h0);
        } catch (const NumericalFailure&) {
            return kInf;
        }
    };

    OptimOptions oopts;
    oopts.max_iter = opts.max_iter;
    OptimResult opt = minimize(objective, theta0, oopts);
    if (!opt.converged) {
        // The simplex stage can settle on a likelihood-degeneracy spike that
        // the quasi-Newton stage cannot leave. Retry gradient-only from the
        // least-squares start and keep the better outcome.
        OptimOptions direct = oopts;
        direct.simplex_max_iter = 0;
        OptimResult retry = minimize(objective, theta0, direct);
        if (retry.converged || retry.f_min < opt.f_min) opt = std::move(retry);
    }
    auto [mc, vp] = unpack(opt.x_min);

    EgarchFit fit{.h_path = Series("h", data.start, {1.0}),
                  .std_residuals = Series("z", data.start, {0.0})};
    fit.converged = opt.converged;
    fit.variance_params = vp;
    fit.variance_stationary = std::fabs(vp.alpha1) < 1.0;
    fit.log_likelihood = -opt.f_min;
    fit.n_obs = static_cast<int>(n);

    // Standard errors from the inverse Hessian in theta space; delta method
    // maps the atanh(alpha1) coordinate back to natural scale.
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
    fit.se_reliable = false;
    if (opt.converged) {
        // Per-observation score matrix by central differences.
        Eigen::VectorXd th = opt.x_min;
        Eigen::MatrixXd scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j) {
            const double hstep = 1e-5 * std::max(1.0, std::fabs(th[static_cast<Eigen::Index>(j)]));
            Eigen::VectorXd tp = th, tm = th;
            tp[static_cast<Eigen::Index>(j)] += hstep;
            tm[static_cast<Eigen::Index>(j)] -= hstep;
            auto [mp, vpp] = unpack(tp);
            auto [mm, vpm] = unpack(tm);
            const auto cp = nll_contributions(mp, vpp, data, h0);
            const auto cm = nll_contributions(mm, vpm, data, h0);
            for (std::size_t t = 0; t < n; ++t)
                scores(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) =
                    (cp[t] - cm[t]) / (2.0 * hstep);
        }
        const Eigen::MatrixXd opg = scores.transpose() * scores;

        const Eigen::MatrixXd H = numerical_hessian(objective, opt.x_min, 1e-4);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eo(opg);
        if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0) {
            cov = H.inverse();
            // QMLE sandwich: H^{-1} (sum of score outer products) H^{-1}.
            if (opts.robust_se) cov = cov * opg * cov;
            fit.se_reliable = cov.diagonal().minCoeff() > 0.0;
        } else if (eo.info() == Eigen::Success && eo.eigenvalues().minCoeff() > 0.0) {
            // Hessian not positive definite (e.g. flat directions at the
            // optimum); fall back to the outer-product-of-gradients estimator.
            cov = opg.inverse();
            fit.se_reliable = cov.diagonal().minCoeff() > 0.0;
        }
    }

    auto make_coeff = [&](const std::string& label, double value, double se) {
        Coefficient c{label, value, se, 0.0, ' '};
        if (fit.converged && fit.se_reliable && se > 0.0) {
            c.z_stat = value / se;
            const double p = 2.0 * (1.0 - normal_cdf(std::fabs(c.z_stat)));
            c.star = significance_star(p);
        }
        return c;
    };

    for (std::size_t j = 0; j < k; ++j) {
        const double se = fit.se_reliable ? std::sqrt(cov(static_cast<Eigen::Index>(j),
                                                         static_cast<Eigen::Index>(j)))
                                          : 0.0;
        fit.mean_coefficients.push_back(make_coeff(data.X.labels()[j], mc[j], se));
    }
    const double se_a0 = fit.se_reliable ? std::sqrt(cov(static_cast<Eigen::Index>(k),
                                                         static_cast<Eigen::Index>(k)))
                                         : 0.0;
    const double se_th1 = fit.se_reliable ? std::sqrt(cov(static_cast<Eigen::Index>(k + 1),
                                                          static_cast<Eigen::Index>(k + 1)))
                                          : 0.0;
    const double se_a1 = (1.0 - vp.alpha1 * vp.alpha1) * se_th1;
    const double se_b = fit.se_reliable ? std::sqrt(cov(static_cast<Eigen::Index>(k + 2),
                                                        static_cast<Eigen::Index>(k + 2)))
                                        : 0.0;
    const double se_g = fit.se_reliable ? std::sqrt(cov(static_cast<Eigen::Index>(k + 3),
                                                        static_cast<Eigen::Index>(k + 3)))
                                        : 0.0;
    fit.variance_coefficients.push_back(make_coeff("alpha0", vp.alpha0, se_a0));
    fit.variance_coefficients.push_back(make_coeff("alpha1", vp.alpha1, se_a1));
    fit.variance_coefficients.push_back(make_coeff("beta", vp.beta, se_b));
    fit.variance_coefficients.push_back(make_coeff("gamma", vp.gamma, se_g));

    // Paths and fit statistics at the QMLE coefficients (same bounded
    // recursion as the likelihood, so the path always exists).
    const auto eps = mean_residuals(mc, data);
    const auto lh = bounded_log_variance_path(vp, eps, h0);
    std::vector<double> h(n);
    for (std::size_t t = 0; t < n; ++t) h[t] = std::exp(lh[t]);
    std::vector<double> z(n);
    for (std::size_t t = 0; t < n; ++t) z[t] = eps[t] / std::sqrt(h[t]);
    fit.h_path = Series("h_" + data.dep_name, data.start, h);
    fit.std_residuals = Series("z_" + data.dep_name, data.start, z);

    double rss = 0.0;
    for (double e : eps) rss += e * e;
    double tss = 0.0;
    if (data.X.has_constant_column()) {
        double ybar = 0.0;
        for (double v : data.y) ybar += v;
        ybar /= static_cast<double>(n);
        for (double v : data.y) tss += (v - ybar) * (v - ybar);
    } else {
        for (double v : data.y) tss += v * v;
    }
    fit.r_squared = tss > 0.0 ? 1.0 - rss / tss : 0.0;
    const auto kk = static_cast<double>(k);
    if (k > 1 && fit.r_squared < 1.0)
        fit.f_statistic = (fit.r_squared / (kk - 1.0)) /
                          ((1.0 - fit.r_squared) / (static_cast<double>(n) - kk));

    const int q = std::min(opts.q_order, static_cast<int>(n) - 1);
    fit.q12 = ljung_box(z, q);
    fit.q1_sq = squared_residual_q(z, 1);
    fit.q12_sq = squared_residual_q(z, q);
    return fit;
}

namespace {

MeanSpec with_default_exo(MeanSpec spec, std::initializer_list<ExoTerm> defaults) {
    if (spec.exogenous.empty()) spec.exogenous.assign(defaults);
    return spec;
}

}  // namespace

EgarchFit fit_inflation_model(const Series& pi, const Series& y, const Series& interest,
                              const Series& oil, const MeanSpec& spec, const EgarchOptions& opts) {
    const MeanSpec full = with_default_exo(spec, {{"i", 1, "eta"}, {"oil", 1, "tau"}});
    const std::map<std::string, const Series*> exo{{"i", &interest}, {"oil", &oil}};
    return fit_ar_egarch(build_mean_data(pi, &y, exo, full, "a", "rho"), opts);
}

EgarchFit fit_output_model(const Series& y, const Series& pi, const Series& y_eu,
                           const MeanSpec& spec, const EgarchOptions& opts) {
    const MeanSpec full = with_default_exo(spec, {{"y_eu", 1, "lambda"}});
    const std::map<std::string, const Series*> exo{{"y_eu", &y_eu}};
    return fit_ar_egarch(build_mean_data(y, &pi, exo, full, "b", "delta"), opts);
}

Series extract_uncertainty(const EgarchFit& fit, const std::string& name) {
    if (!fit.converged) throw DomainError("extract_uncertainty requires a converged fit");
    return fit.h_path.renamed(name);
}

}  // namespace uncvol
