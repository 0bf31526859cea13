#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "uncvol/egarch.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/simulate.hpp"

using namespace uncvol;

TEST_CASE("recursion collapses to exp(alpha0) when only the intercept is active") {
    EgarchParams p{.alpha0 = -0.7};
    std::vector<double> eps(20, 0.5);
    const auto h = egarch_recursion(p, eps, 2.0);
    CHECK(h[0] == 2.0);
    for (std::size_t t = 1; t < h.size(); ++t)
        CHECK(h[t] == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
}

TEST_CASE("positive gamma makes positive shocks raise variance more") {
    EgarchParams p{.alpha0 = -0.2, .alpha1 = 0.6, .beta = 0.3, .gamma = 0.4};
    std::vector<double> plus{0.1, 1.5, 0.2, 0.2};
    std::vector<double> minus{0.1, -1.5, 0.2, 0.2};
    const auto hp = egarch_recursion(p, plus, 1.0);
    const auto hm = egarch_recursion(p, minus, 1.0);
    CHECK(hp[1] == hm[1]);  // shock at index 1 affects h from index 2 on
    CHECK(hp[2] > hm[2]);

    // reversed for negative gamma
    p.gamma = -0.4;
    CHECK(egarch_recursion(p, plus, 1.0)[2] < egarch_recursion(p, minus, 1.0)[2]);
}

TEST_CASE("recursion matches the naive loop oracle on random draws") {
    NormalSampler rng(2024);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        EgarchParams p{.alpha0 = 0.3 * rng.next(),
                       .alpha1 = 0.9 * std::tanh(rng.next()),
                       .beta = 0.3 * rng.next(),
                       .gamma = 0.3 * rng.next()};
        std::vector<double> eps(30);
        for (auto& e : eps) e = rng.next();
        const double h0 = std::exp(rng.next());
        std::vector<double> h;
        try {
            h = egarch_recursion(p, eps, h0);
        } catch (const NumericalFailure&) {
            continue;  // explosive draw; overflow is covered by the guards test
        }
        const auto oracle = oracles::naive_egarch_path(p.alpha0, p.alpha1, p.beta, p.gamma, eps, h0);
        REQUIRE(h.size() == oracle.size());
        for (std::size_t t = 0; t < h.size(); ++t)
            CHECK(std::fabs(h[t] - oracle[t]) <= 1e-12 * std::max(1.0, oracle[t]));
        ++checked;
    }
    CHECK(checked >= 150);  // the draw ranges keep most paths finite
}

TEST_CASE("recursion guards") {
    EgarchParams p;
    CHECK_THROWS_AS(egarch_recursion(p, std::vector<double>{}, 1.0), SizeError);
    CHECK_THROWS_AS(egarch_recursion(p, std::vector<double>{1.0}, 0.0), DomainError);
    EgarchParams boom{.alpha0 = 500.0, .alpha1 = 2.0, .beta = 0.0, .gamma = 0.0};
    std::vector<double> eps(10, 1.0);
    CHECK_THROWS_AS(egarch_recursion(boom, eps, 1.0), NumericalFailure);
}

namespace {

MeanData intercept_only_data(const std::vector<double>& y) {
    MeanData d;
    d.y = y;
    d.X.add_column("a0", std::vector<double>(y.size(), 1.0));
    d.start = {2000, 1};
    d.dep_name = "x";
    return d;
}

}  // namespace

TEST_CASE("likelihood reduces to the iid-Gaussian form in the degenerate case") {
    NormalSampler rng(9);
    std::vector<double> y(200);
    for (auto& v : y) v = 1.5 + 0.8 * rng.next();
    const MeanData data = intercept_only_data(y);

    const double mu = 1.5;
    const double alpha0 = std::log(0.64);
    EgarchParams vp{.alpha0 = alpha0};
    const double nll = negative_log_likelihood(std::vector<double>{mu}, vp, data);

    double expected = 0.0;
    const double s2 = std::exp(alpha0);
    for (double v : y) {
        const double e = v - mu;
        expected += 0.5 * (std::log(2.0 * std::numbers::pi) + std::log(s2) + e * e / s2);
    }
    CHECK(nll == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("finite-difference gradient of the likelihood matches a Richardson oracle") {
    NormalSampler rng(13);
    std::vector<double> y(120);
    for (auto& v : y) v = 0.3 + rng.next();
    const MeanData data = intercept_only_data(y);

    auto f = [&](const std::vector<double>& th) {
        EgarchParams vp{.alpha0 = th[1], .alpha1 = th[2], .beta = th[3], .gamma = th[4]};
        return negative_log_likelihood(std::vector<double>{th[0]}, vp, data, 1.0);
    };
    const std::vector<double> x0{0.25, -0.1, 0.4, 0.2, 0.1};
    for (std::size_t i = 0; i < x0.size(); ++i) {
        auto at = [&](double h) {
            auto xp = x0, xm = x0;
            xp[i] += h;
            xm[i] -= h;
            return (f(xp) - f(xm)) / (2.0 * h);
        };
        const double g1 = at(1e-4);
        // Richardson extrapolation of the central difference
        const double g2 = at(5e-5);
        const double oracle = (4.0 * g2 - g1) / 3.0;
        const double plain = at(1e-6);
        CHECK(plain == doctest::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("joint fit recovers simulated parameters") {
    // One replication at T = 3000; the full 100-replication recovery study
    // lives in the acceptance suite.
    DgpSpec dgp;
    dgp.mean_spec.own_lags = {1};
    dgp.mean_coefficients = {0.1, 0.4};  // intercept, a1
    dgp.variance_params = {.alpha0 = -0.5, .alpha1 = 0.8, .beta = 0.3, .gamma = 0.4};
    dgp.T = 3000;
    dgp.seed = 4242;
    const Series sim = simulate_ar_egarch(dgp);

    MeanSpec spec;
    spec.own_lags = {1};
    const std::map<std::string, const Series*> no_exo;
    const EgarchFit fit = fit_ar_egarch(build_mean_data(sim, nullptr, no_exo, spec));
    REQUIRE(fit.converged);
    CHECK(fit.mean_coefficients[1].value == doctest::Approx(0.4).epsilon(0.15));
    CHECK(fit.variance_params.alpha1 == doctest::Approx(0.8).epsilon(0.15));
    CHECK(std::fabs(fit.variance_params.beta - 0.3) < 0.15);
    CHECK(std::fabs(fit.variance_params.gamma - 0.4) < 0.15);
    CHECK(fit.variance_stationary);
    CHECK(fit.se_reliable);

    SUBCASE("h path is positive and matches the recursion replay") {
        for (std::size_t t = 0; t < fit.h_path.size(); ++t) CHECK(fit.h_path[t] > 0.0);
        // replay: residuals implied by mean coefficients
        std::vector<double> coeffs;
        for (const auto& c : fit.mean_coefficients) coeffs.push_back(c.value);
        const MeanData data = build_mean_data(sim, nullptr, no_exo, spec);
        std::vector<double> eps = data.y;
        for (std::size_t j = 0; j < data.X.n_cols(); ++j)
            for (std::size_t t = 0; t < eps.size(); ++t)
                eps[t] -= coeffs[j] * data.X.column(j)[t];
        const auto h = egarch_recursion(fit.variance_params, eps, fit.h_path[0]);
        for (std::size_t t = 0; t < h.size(); ++t)
            CHECK(std::fabs(h[t] - fit.h_path[t]) <= 1e-12 * std::max(1.0, h[t]));
    }

    SUBCASE("standardized residuals are roughly standardized") {
        double m = 0.0, v = 0.0;
        const auto& z = fit.std_residuals;
        for (std::size_t t = 0; t < z.size(); ++t) m += z[t];
        m /= static_cast<double>(z.size());
        for (std::size_t t = 0; t < z.size(); ++t) v += (z[t] - m) * (z[t] - m);
        v /= static_cast<double>(z.size() - 1);
        CHECK(std::fabs(m) < 0.2);
        CHECK(v > 0.7);
        CHECK(v < 1.3);
    }

    SUBCASE("likelihood beats the nested homoscedastic model") {
        const MeanData data = build_mean_data(sim, nullptr, no_exo, spec);
        const OlsFit ols = ols_fit(data.y, data.X);
        CHECK(fit.log_likelihood >= ols.log_likelihood - 1e-6);
    }

    SUBCASE("perturbing a coefficient from the optimum raises the objective") {
        const MeanData data = build_mean_data(sim, nullptr, no_exo, spec);
        std::vector<double> coeffs;
        for (const auto& c : fit.mean_coefficients) coeffs.push_back(c.value);
        const double base = negative_log_likelihood(coeffs, fit.variance_params, data,
                                                    fit.h_path[0]);
        auto bumped = coeffs;
        bumped[1] += 0.05;
        CHECK(negative_log_likelihood(bumped, fit.variance_params, data, fit.h_path[0]) > base);
        EgarchParams vp = fit.variance_params;
        vp.gamma += 0.1;
        CHECK(negative_log_likelihood(coeffs, vp, data, fit.h_path[0]) > base);
    }

    SUBCASE("uncertainty extraction relabels the variance path") {
        const Series h = extract_uncertainty(fit, "h_pi");
        CHECK(h.name() == "h_pi");
        CHECK(h.size() == fit.h_path.size());
        CHECK(h.size() == static_cast<std::size_t>(fit.n_obs));
    }
}

TEST_CASE("inflation and output wrappers wire exogenous defaults") {
    DgpSpec dgp;
    dgp.mean_spec.own_lags = {1};
    dgp.mean_coefficients = {0.2, 0.3};
    dgp.variance_params = {.alpha0 = -0.3, .alpha1 = 0.5, .beta = 0.2, .gamma = 0.1};
    dgp.T = 400;
    dgp.seed = 99;
    const Series pi = simulate_ar_egarch(dgp, "pi");
    dgp.seed = 100;
    const Series y = simulate_ar_egarch(dgp, "y");
    dgp.seed = 101;
    const Series i_rate = simulate_ar_egarch(dgp, "i");
    dgp.seed = 102;
    const Series oil = simulate_ar_egarch(dgp, "oil");

    MeanSpec spec;
    spec.own_lags = {1};
    spec.cross_lags = {1};
    const EgarchFit fit = fit_inflation_model(pi, y, i_rate, oil, spec);
    // intercept, a1, rho1, eta, tau
    REQUIRE(fit.mean_coefficients.size() == 5);
    CHECK(fit.mean_coefficients[0].label == "a0");
    CHECK(fit.mean_coefficients[1].label == "a1");
    CHECK(fit.mean_coefficients[2].label == "rho1");
    CHECK(fit.mean_coefficients[3].label == "eta");
    CHECK(fit.mean_coefficients[4].label == "tau");

    const EgarchFit ofit = fit_output_model(y, pi, oil.renamed("y_eu"), spec);
    REQUIRE(ofit.mean_coefficients.size() == 4);
    CHECK(ofit.mean_coefficients[0].label == "b0");
    CHECK(ofit.mean_coefficients[2].label == "delta1");
    CHECK(ofit.mean_coefficients[3].label == "lambda");
}

TEST_CASE("zero-variance input is rejected as unidentifiable") {
    const Series flat("pi", {2000, 1}, std::vector<double>(100, 2.0));
    MeanSpec spec;
    spec.own_lags = {1};
    const std::map<std::string, const Series*> no_exo;
    CHECK_THROWS_AS(fit_ar_egarch(build_mean_data(flat, nullptr, no_exo, spec)), SingularityError);
}

TEST_CASE("extract_uncertainty requires convergence") {
    EgarchFit fit{.h_path = Series("h", {2000, 1}, {1.0}),
                  .std_residuals = Series("z", {2000, 1}, {0.0})};
    fit.converged = false;
    CHECK_THROWS_AS(extract_uncertainty(fit, "h_pi"), DomainError);
}
