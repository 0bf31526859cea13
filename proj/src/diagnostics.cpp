#include "uncvol/diagnostics.hpp"

#include <cmath>

#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/regression.hpp"

namespace uncvol {

namespace {

void set_flags(TestStat& t) {
    t.sig1 = t.p_value < 0.01;
    t.sig5 = t.p_value < 0.05;
    t.sig10 = t.p_value < 0.10;
}

TestStat degenerate_chi2(int dof) {
    TestStat t;
    t.distribution = RefDist::chi_square;
    t.dof1 = dof;
    t.degenerate = true;
    return t;
}

}  // namespace

std::vector<double> autocorrelations(std::span<const double> x, int k) {
    const int n = static_cast<int>(x.size());
    if (k < 1 || k >= n) throw SizeError("autocorrelations: need 1 <= k < n");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    std::vector<double> rho(static_cast<std::size_t>(k), 0.0);
    if (c0 <= 0.0) return rho;  // caller detects degeneracy via variance
    for (int j = 1; j <= k; ++j) {
        double cj = 0.0;
        for (int t = j; t < n; ++t) cj += (x[static_cast<std::size_t>(t)] - mean) *
                                          (x[static_cast<std::size_t>(t - j)] - mean);
        rho[static_cast<std::size_t>(j - 1)] = cj / c0;
    }
    return rho;
}

TestStat ljung_box(std::span<const double> x, int k, int dof_reduction) {
    const int n = static_cast<int>(x.size());
    if (k < 1 || n <= k) throw SizeError("ljung_box: need length > k >= 1");
    if (dof_reduction < 0 || dof_reduction >= k)
        throw SizeError("ljung_box: dof_reduction must be in [0, k)");

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    const int dof = k - dof_reduction;
    if (c0 <= 0.0) return degenerate_chi2(dof);

    const auto rho = autocorrelations(x, k);
    double q = 0.0;
    for (int j = 1; j <= k; ++j)
        q += rho[static_cast<std::size_t>(j - 1)] * rho[static_cast<std::size_t>(j - 1)] /
             static_cast<double>(n - j);
    q *= static_cast<double>(n) * (n + 2.0);

    TestStat t;
    t.statistic = q;
    t.distribution = RefDist::chi_square;
    t.dof1 = dof;
    t.p_value = 1.0 - chi_square_cdf(q, dof);
    set_flags(t);
    return t;
}

TestStat squared_residual_q(std::span<const double> x, int k) {
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];
    return ljung_box(sq, k);
}

TestStat arch_lm(std::span<const double> x, int q) {
    const int n = static_cast<int>(x.size());
    if (q < 1) throw SizeError("arch_lm: q must be >= 1");
    if (n <= q + 10) throw SizeError("arch_lm: sample too small");

    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i];

    const int m = n - q;
    DesignMatrix X;
    X.add_column("const", std::vector<double>(static_cast<std::size_t>(m), 1.0));
    for (int lag = 1; lag <= q; ++lag) {
        std::vector<double> col(static_cast<std::size_t>(m));
        for (int t = 0; t < m; ++t) col[static_cast<std::size_t>(t)] = sq[static_cast<std::size_t>(t + q - lag)];
        X.add_column("lag" + std::to_string(lag), std::move(col));
    }
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int t = 0; t < m; ++t) y[static_cast<std::size_t>(t)] = sq[static_cast<std::size_t>(t + q)];

    const OlsFit fit = ols_fit(y, X);  // SingularityError propagates
    TestStat t;
    t.statistic = m * fit.r_squared;
    t.distribution = RefDist::chi_square;
    t.dof1 = q;
    t.p_value = 1.0 - chi_square_cdf(std::max(0.0, t.statistic), q);
    set_flags(t);
    return t;
}

}  // namespace uncvol
