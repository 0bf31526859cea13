#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "uncvol/dist.hpp"
#include "uncvol/errors.hpp"

using namespace uncvol;

TEST_CASE("chi-square CDF against arbitrary-precision references") {
    for (const auto& ref : oracles::chi_square_reference())
        CHECK(std::fabs(chi_square_cdf(ref.x, ref.d1) - ref.cdf) < 1e-10);
}

TEST_CASE("F CDF against arbitrary-precision references") {
    for (const auto& ref : oracles::f_reference())
        CHECK(std::fabs(f_cdf(ref.x, ref.d1, ref.d2) - ref.cdf) < 1e-10);
}

TEST_CASE("chi-square trivial values") {
    CHECK(chi_square_cdf(0.0, 1) == 0.0);
    CHECK(chi_square_cdf(0.0, 12) == 0.0);
    // 95th percentile for 12 dof, computed at 40 digits
    CHECK(chi_square_cdf(21.02606981748306539652, 12) == doctest::Approx(0.95).epsilon(1e-6));
    CHECK_THROWS_AS(chi_square_cdf(-1.0, 2), DomainError);
    CHECK_THROWS_AS(chi_square_cdf(1.0, 0), DomainError);
}

TEST_CASE("F CDF symmetry at x = 1 with equal dof") {
    for (int d : {1, 2, 5, 12, 60}) CHECK(f_cdf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the normal CDF") {
    for (double p : {1e-8, 0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999, 1 - 1e-8})
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(normal_quantile(0.0), DomainError);
}

TEST_CASE("CDFs are monotone") {
    double prev = -1.0;
    for (double x = 0.0; x < 30.0; x += 0.37) {
        const double c = chi_square_cdf(x, 5);
        CHECK(c >= prev);
        prev = c;
    }
    prev = -1.0;
    for (double x = 0.0; x < 10.0; x += 0.21) {
        const double c = f_cdf(x, 4, 30);
        CHECK(c >= prev);
        prev = c;
    }
}
