#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "uncvol/causality.hpp"
#include "uncvol/errors.hpp"
#include "uncvol/simulate.hpp"

using namespace uncvol;

namespace {

Series noise_series(int n, std::uint64_t seed, const std::string& name = "x",
                    YearMonth start = {1995, 1}) {
    NormalSampler rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.next();
    return Series(name, start, std::move(v));
}

// x_t = slope * z_{t-1} + e_t: z causes x with the sign of `slope`.
std::pair<Series, Series> caused_pair(int n, double slope, std::uint64_t seed) {
    NormalSampler rng(seed);
    std::vector<double> z, x;
    for (int t = 0; t < n; ++t) {
        const double zt = rng.next();
        x.push_back((t > 0 ? slope * z.back() : 0.0) + rng.next());
        z.push_back(zt);
    }
    return {Series("x", {1995, 1}, std::move(x)), Series("z", {1995, 1}, std::move(z))};
}

}  // namespace

TEST_CASE("granger F matches a brute-force two-regression oracle") {
    const auto [x, z] = caused_pair(150, 0.8, 31);
    const int lag = 3;
    const GrangerOutcome g = granger_test(x, z, lag);

    // Build both regressions directly and compare RSS / F.
    const int n = 150 - lag;
    std::vector<double> y(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> restricted(1 + lag, std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<std::vector<double>> unrestricted(1 + 2 * lag, std::vector<double>(static_cast<std::size_t>(n)));
    for (int t = 0; t < n; ++t) {
        const std::size_t u = static_cast<std::size_t>(t);
        y[u] = x[static_cast<std::size_t>(t + lag)];
        restricted[0][u] = unrestricted[0][u] = 1.0;
        for (int j = 1; j <= lag; ++j) {
            restricted[static_cast<std::size_t>(j)][u] = x[static_cast<std::size_t>(t + lag - j)];
            unrestricted[static_cast<std::size_t>(j)][u] = x[static_cast<std::size_t>(t + lag - j)];
            unrestricted[static_cast<std::size_t>(lag + j)][u] = z[static_cast<std::size_t>(t + lag - j)];
        }
    }
    const auto r = oracles::normal_equations_ols(y, restricted);
    const auto un = oracles::normal_equations_ols(y, unrestricted);
    CHECK(g.rss_restricted == doctest::Approx(r.rss).epsilon(1e-8));
    CHECK(g.rss_unrestricted == doctest::Approx(un.rss).epsilon(1e-8));
    const double f = ((r.rss - un.rss) / lag) / (un.rss / (n - 2 * lag - 1));
    CHECK(g.f_stat == doctest::Approx(f).epsilon(1e-8));
    CHECK(g.n_obs == n);

    double coef_sum = 0.0;
    for (int j = 1; j <= lag; ++j) coef_sum += un.coefficients[static_cast<std::size_t>(lag + j)];
    CHECK(g.sign == (coef_sum > 0 ? 1 : -1));
}

TEST_CASE("restricted rss never undercuts the unrestricted rss") {
    for (int lag : {1, 4, 8}) {
        const Series x = noise_series(200, 5, "x");
        const Series z = noise_series(200, 6, "z");
        const GrangerOutcome g = granger_test(x, z, lag);
        CHECK(g.rss_restricted >= g.rss_unrestricted - 1e-10);
        CHECK(g.f_stat >= 0.0);
    }
}

TEST_CASE("size is near nominal for independent series") {
    int rejections = 0;
    const int reps = 300;
    for (int r = 0; r < reps; ++r) {
        const Series x = noise_series(150, 1000 + 2 * static_cast<std::uint64_t>(r), "x");
        const Series z = noise_series(150, 1001 + 2 * static_cast<std::uint64_t>(r), "z");
        if (granger_test(x, z, 4).p_value < 0.05) ++rejections;
    }
    const double rate = rejections / static_cast<double>(reps);
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.08);
}

TEST_CASE("power and sign on a genuinely caused pair") {
    int rejections = 0, positive = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
        const auto [x, z] = caused_pair(200, 0.8, 5000 + static_cast<std::uint64_t>(r));
        const GrangerOutcome g = granger_test(x, z, 4);
        if (g.p_value < 0.05) ++rejections;
        if (g.sign > 0) ++positive;
    }
    CHECK(rejections >= 95);
    CHECK(positive >= 95);

    SUBCASE("negative slope flips the reported sign") {
        const auto [x, z] = caused_pair(400, -0.8, 9);
        CHECK(granger_test(x, z, 4).sign == -1);
    }

    SUBCASE("no reverse causality") {
        int reverse = 0;
        for (int r = 0; r < reps; ++r) {
            const auto [x, z] = caused_pair(200, 0.8, 5000 + static_cast<std::uint64_t>(r));
            if (granger_test(z, x, 4).p_value < 0.05) ++reverse;
        }
        CHECK(reverse <= 12);
    }
}

TEST_CASE("statistic is invariant under affine rescaling of either series") {
    const auto [x, z] = caused_pair(180, 0.6, 71);
    const GrangerOutcome base = granger_test(x, z, 4);

    std::vector<double> xs(x.values());
    for (auto& v : xs) v = 5.0 * v + 3.0;
    std::vector<double> zs(z.values());
    for (auto& v : zs) v = -2.0 * v + 1.0;
    const GrangerOutcome scaled = granger_test(Series("x", x.start(), xs), Series("z", z.start(), zs), 4);
    CHECK(scaled.f_stat == doctest::Approx(base.f_stat).epsilon(1e-8));
    // negative rescaling of the causing series flips the sign of the sum
    CHECK(scaled.sign == -base.sign);
}

TEST_CASE("series on different calendars are aligned on the overlap") {
    const auto [x, z] = caused_pair(200, 0.8, 17);
    // shift z so only part of it overlaps x
    const Series z_late("z", {1996, 1}, std::vector<double>(z.values().begin() + 12, z.values().end()));
    const GrangerOutcome full = granger_test(x, z, 4);
    const GrangerOutcome part = granger_test(x, z_late, 4);
    CHECK(part.n_obs == full.n_obs - 12);
    CHECK(part.p_value < 0.05);  // causality still detected on the overlap
}

TEST_CASE("granger guards") {
    const Series x = noise_series(30, 1, "x");
    const Series z = noise_series(30, 2, "z");
    CHECK_THROWS_AS(granger_test(x, z, 0), SizeError);
    CHECK_THROWS_AS(granger_test(noise_series(10, 3), noise_series(10, 4, "z"), 4), SizeError);
    const Series far("z", {2050, 1}, std::vector<double>(30, 0.0));
    CHECK_THROWS_AS(granger_test(x, far, 2), SizeError);
}

TEST_CASE("battery structure and optimal-lag marking") {
    const auto [x, z] = caused_pair(250, 0.8, 23);
    const Series w = noise_series(250, 99, "w");
    const std::vector<Series> set{x, z, w};
    const std::vector<CausalityPair> pairs{{"x", "z"}, {"z", "x"}, {"x", "w"}};
    const auto results = causality_battery(set, pairs, {4, 8, 12});
    REQUIRE(results.size() == 3);
    for (const auto& res : results) {
        REQUIRE(res.error.empty());
        REQUIRE(res.per_lag.size() == 3);
        int optimal_count = 0;
        for (const auto& lr : res.per_lag) {
            CHECK((lr.lag == 4 || lr.lag == 8 || lr.lag == 12));
            CHECK(lr.sig5 == (lr.p_value < 0.05));
            if (lr.is_optimal) ++optimal_count;
        }
        CHECK(optimal_count == 1);
    }
    // the true one-lag dependence should be highly significant at lag 4
    CHECK(results[0].per_lag[0].sig1);
    CHECK(results[0].per_lag[0].sign == 1);
}

TEST_CASE("battery records per-pair failures without aborting") {
    const Series x = noise_series(200, 3, "x");
    const Series tiny = noise_series(6, 4, "tiny");
    const auto results = causality_battery({x, tiny}, {{"x", "tiny"}, {"tiny", "x"}}, {4, 8});
    REQUIRE(results.size() == 2);
    CHECK_FALSE(results[0].error.empty());
    CHECK_FALSE(results[1].error.empty());

    // unknown series name is also a per-pair error
    const auto r2 = causality_battery({x}, {{"x", "ghost"}}, {4});
    REQUIRE(r2.size() == 1);
    CHECK_FALSE(r2[0].error.empty());
}
