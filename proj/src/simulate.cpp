#include "uncvol/simulate.hpp"

#include <cmath>

#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"

namespace uncvol {

double NormalSampler::next() {
    // 53-bit uniform in (0,1), then inverse CDF.
    const double u = (static_cast<double>(rng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    return normal_quantile(u);
}

NormalSampler NormalSampler::for_replication(std::uint64_t base_seed, std::uint64_t index) {
    return NormalSampler(base_seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

void DgpSpec::validate() const {
    mean_spec.validate();
    if (T < 50) throw SizeError("DgpSpec: T must be >= 50");
    if (burn_in < 0) throw SizeError("DgpSpec: burn_in must be >= 0");
    std::size_t expect = (mean_spec.include_intercept ? 1 : 0) + mean_spec.own_lags.size() +
                         mean_spec.cross_lags.size() + mean_spec.exogenous.size();
    if (mean_coefficients.size() != expect)
        throw SizeError("DgpSpec: expected " + std::to_string(expect) + " mean coefficients, got " +
                        std::to_string(mean_coefficients.size()));
}

namespace {

double initial_variance(const EgarchParams& p) {
    if (std::fabs(p.alpha1) < 1.0) return std::exp(p.alpha0 / (1.0 - p.alpha1));
    return std::exp(p.alpha0);
}

struct EquationState {
    const DgpSpec* spec;
    NormalSampler sampler;
    std::vector<double> y;    // generated path including burn-in
    std::vector<double> eps;  // innovations
    double h;                 // current conditional variance
};

// Mean of equation `self` at step t; `other` may be null for univariate runs.
double mean_at(const EquationState& self, const EquationState* other, int t,
               const std::map<std::string, std::vector<double>>& exo_paths) {
    const MeanSpec& ms = self.spec->mean_spec;
    std::size_t ci = 0;
    double mu = 0.0;
    if (ms.include_intercept) mu += self.spec->mean_coefficients[ci++];
    for (int l : ms.own_lags) {
        const double v = t - l >= 0 ? self.y[static_cast<std::size_t>(t - l)] : 0.0;
        mu += self.spec->mean_coefficients[ci++] * v;
    }
    for (int l : ms.cross_lags) {
        if (other == nullptr) throw SizeError("cross lags require a second equation");
        const double v = t - l >= 0 ? other->y[static_cast<std::size_t>(t - l)] : 0.0;
        mu += self.spec->mean_coefficients[ci++] * v;
    }
    for (const auto& e : ms.exogenous) {
        auto it = exo_paths.find(e.series_label);
        if (it == exo_paths.end())
            throw SizeError("exogenous path '" + e.series_label + "' not supplied");
        const int idx = t - e.lag;
        const double v = idx >= 0 && idx < static_cast<int>(it->second.size())
                             ? it->second[static_cast<std::size_t>(idx)]
                             : 0.0;
        mu += self.spec->mean_coefficients[ci++] * v;
    }
    return mu;
}

void advance(EquationState& st, const EquationState* other, int t,
             const std::map<std::string, std::vector<double>>& exo_paths) {
    if (t > 0) st.h = egarch_step(st.spec->variance_params, st.h, st.eps[static_cast<std::size_t>(t - 1)]);
    if (!std::isfinite(st.h) || st.h <= 0.0)
        throw NumericalFailure("simulate: variance overflow at step " + std::to_string(t));
    const double z = st.sampler.next();
    const double e = std::sqrt(st.h) * z;
    const double v = mean_at(st, other, t, exo_paths) + e;
    if (!std::isfinite(v))
        throw NumericalFailure("simulate: overflow at step " + std::to_string(t));
    st.eps.push_back(e);
    st.y.push_back(v);
}

Series tail_series(const EquationState& st, const std::string& name) {
    const DgpSpec& sp = *st.spec;
    std::vector<double> out(st.y.end() - sp.T, st.y.end());
    return Series(name, sp.start, std::move(out));
}

}  // namespace

Series simulate_ar_egarch(const DgpSpec& spec, const std::string& name,
                          const std::map<std::string, std::vector<double>>& exo_paths) {
    spec.validate();
    const int total = spec.burn_in + spec.T;
    EquationState st{&spec, NormalSampler(spec.seed), {}, {}, initial_variance(spec.variance_params)};
    st.y.reserve(static_cast<std::size_t>(total));
    st.eps.reserve(static_cast<std::size_t>(total));
    for (int t = 0; t < total; ++t) advance(st, nullptr, t, exo_paths);
    return tail_series(st, name);
}

std::pair<Series, Series> simulate_bivariate_system(const DgpSpec& spec_a, const DgpSpec& spec_b,
                                                    const std::string& name_a,
                                                    const std::string& name_b) {
    spec_a.validate();
    spec_b.validate();
    if (spec_a.T != spec_b.T || spec_a.burn_in != spec_b.burn_in)
        throw SizeError("bivariate system: both equations need the same T and burn_in");
    if (!spec_a.mean_spec.exogenous.empty() || !spec_b.mean_spec.exogenous.empty())
        throw SizeError("bivariate system does not drive exogenous channels");

    const int total = spec_a.burn_in + spec_a.T;
    EquationState a{&spec_a, NormalSampler(spec_a.seed), {}, {}, initial_variance(spec_a.variance_params)};
    EquationState b{&spec_b, NormalSampler(spec_b.seed), {}, {}, initial_variance(spec_b.variance_params)};
    const std::map<std::string, std::vector<double>> no_exo;
    for (int t = 0; t < total; ++t) {
        advance(a, &b, t, no_exo);
        advance(b, &a, t, no_exo);
    }
    return {tail_series(a, name_a), tail_series(b, name_b)};
}

}  // namespace uncvol
