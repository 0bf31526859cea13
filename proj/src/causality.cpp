#include "uncvol/causality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"

namespace uncvol {

namespace {

struct AlignedPair {
    std::vector<double> caused;
    std::vector<double> causing;
};

AlignedPair align(const Series& caused, const Series& causing) {
    YearMonth first = std::max(caused.start(), causing.start());
    YearMonth last = std::min(caused.end(), causing.end());
    const int m = last.months_since(first) + 1;
    if (m < 1) throw SizeError("granger_test: no overlapping sample");
    AlignedPair out;
    out.caused.resize(static_cast<std::size_t>(m));
    out.causing.resize(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) {
        out.caused[static_cast<std::size_t>(t)] = caused.at(first.plus_months(t));
        out.causing[static_cast<std::size_t>(t)] = causing.at(first.plus_months(t));
    }
    return out;
}

// Builds both Granger regressions on the sample that drops `drop` leading
// observations (drop >= lag), returning (restricted, unrestricted).
std::pair<OlsFit, OlsFit> granger_fits(const AlignedPair& ap, int lag, int drop) {
    const int n = static_cast<int>(ap.caused.size());
    const int m = n - drop;
    DesignMatrix Xr, Xu;
    Xr.add_column("const", std::vector<double>(static_cast<std::size_t>(m), 1.0));
    Xu.add_column("const", std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int l = 1; l <= lag; ++l) {
        std::vector<double> own(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) own[static_cast<std::size_t>(t)] = ap.caused[static_cast<std::size_t>(t + drop - l)];
        Xr.add_column("own" + std::to_string(l), own);
        Xu.add_column("own" + std::to_string(l), std::move(own));
    }
    for (int l = 1; l <= lag; ++l) {
        std::vector<double> cr(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) cr[static_cast<std::size_t>(t)] = ap.causing[static_cast<std::size_t>(t + drop - l)];
        Xu.add_column("causing" + std::to_string(l), std::move(cr));
    }
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) y[static_cast<std::size_t>(t)] = ap.caused[static_cast<std::size_t>(t + drop)];
    return {ols_fit(y, Xr), ols_fit(y, Xu)};
}

}  // namespace

GrangerOutcome granger_test(const Series& caused, const Series& causing, int lag) {
    if (lag < 1) throw SizeError("granger_test: lag must be >= 1");
    const AlignedPair ap = align(caused, causing);
    const int n = static_cast<int>(ap.caused.size());
    if (n <= 2 * lag + 10) throw SizeError("granger_test: common sample too small for lag " +
                                           std::to_string(lag));

    auto [restricted, unrestricted] = granger_fits(ap, lag, lag);
    const int m = unrestricted.n_obs;
    const int dof2 = m - 2 * lag - 1;
    const double num = (restricted.rss - unrestricted.rss) / static_cast<double>(lag);
    const double den = unrestricted.rss / static_cast<double>(dof2);
    if (den <= 0.0) throw SingularityError("granger_test: perfect unrestricted fit");

    GrangerOutcome out;
    out.f_stat = std::max(0.0, num / den);
    out.p_value = 1.0 - f_cdf(out.f_stat, lag, dof2);
    out.rss_restricted = restricted.rss;
    out.rss_unrestricted = unrestricted.rss;
    out.n_obs = m;

    double coeff_sum = 0.0;
    for (int l = 1; l <= lag; ++l)
        coeff_sum += unrestricted.coefficients[static_cast<std::size_t>(lag + l)];
    out.sign = coeff_sum > 0.0 ? 1 : coeff_sum < 0.0 ? -1 : 0;
    return out;
}

std::vector<CausalityResult> causality_battery(const std::vector<Series>& series_set,
                                               const std::vector<CausalityPair>& pairs,
                                               const std::vector<int>& lag_lengths,
                                               Criterion optimal_criterion) {
    if (lag_lengths.empty()) throw SizeError("causality_battery: empty lag grid");
    auto find = [&](const std::string& name) -> const Series& {
        for (const auto& s : series_set)
            if (s.name() == name) return s;
        throw SizeError("causality_battery: no series named '" + name + "'");
    };
    const int max_lag = *std::max_element(lag_lengths.begin(), lag_lengths.end());

    std::vector<CausalityResult> results;
    for (const auto& pr : pairs) {
        CausalityResult res{pr.caused, pr.causing, {}, {}};
        try {
            const Series& caused = find(pr.caused);
            const Series& causing = find(pr.causing);
            const AlignedPair ap = align(caused, causing);

            int best_lag = -1;
            double best_crit = std::numeric_limits<double>::infinity();
            for (int lag : lag_lengths) {
                const GrangerOutcome g = granger_test(caused, causing, lag);
                LagResult lr;
                lr.lag = lag;
                lr.f_stat = g.f_stat;
                lr.p_value = g.p_value;
                lr.sig1 = g.p_value < 0.01;
                lr.sig5 = g.p_value < 0.05;
                lr.sig10 = g.p_value < 0.10;
                lr.sign = g.sign;
                res.per_lag.push_back(lr);

                // Criterion comparison on the common sample implied by the
                // largest lag in the grid.
                auto [r, u] = granger_fits(ap, lag, max_lag);
                const auto ic = information_criteria(u.log_likelihood, u.n_params, u.n_obs);
                const double crit = optimal_criterion == Criterion::aic ? ic.aic : ic.sic;
                if (crit < best_crit) {
                    best_crit = crit;
                    best_lag = lag;
                }
            }
            for (auto& lr : res.per_lag) lr.is_optimal = (lr.lag == best_lag);
        } catch (const std::exception& e) {
            res.error = e.what();
            res.per_lag.clear();
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace uncvol
