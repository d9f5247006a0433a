#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rrgen/chi2.hpp"

using namespace rrgen;

TEST_SUITE("chi2") {

TEST_CASE("cdf at zero and closed form for two dof") {
    CHECK(chi2_cdf(0.0, 7) == 0.0);
    // With 2 dof the CDF is 1 - exp(-x/2).
    const double x = 2.0 * std::log(2.0);
    CHECK(chi2_cdf(x, 2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(chi2_cdf(5.0, 2) == doctest::Approx(1.0 - std::exp(-2.5)).epsilon(1e-12));
}

TEST_CASE("cdf matches quadrature oracle near the detection threshold") {
    const double via_quadrature = oracle::chi2_cdf_quadrature(38.582, 19);
    const double via_igamma = chi2_cdf(38.582, 19);
    CHECK(std::abs(via_igamma - via_quadrature) < 1e-8);
    CHECK(via_igamma == doctest::Approx(0.995).epsilon(1e-4));
}

TEST_CASE("cdf rejects negative arguments and absurd dof") {
    CHECK_THROWS_AS(chi2_cdf(-0.1, 3), std::invalid_argument);
    CHECK_THROWS_AS(chi2_cdf(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(chi2_cdf(1.0, 2000000), std::invalid_argument);
}

TEST_CASE("inverse reproduces the tabulated detection threshold") {
    const double gamma = chi2_inv(0.995, 19);
    CHECK(std::abs(gamma - 38.58) < 0.01);
    CHECK(chi2_cdf(gamma, 19) == doctest::Approx(0.995).epsilon(1e-10));
}

TEST_CASE("inverse closed form and edge values") {
    CHECK(chi2_inv(0.5, 2) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-9));
    CHECK(chi2_inv(0.0, 11) == 0.0);
    CHECK_THROWS_AS(chi2_inv(-0.01, 3), std::invalid_argument);
    CHECK_THROWS_AS(chi2_inv(1.0, 3), std::invalid_argument);
}

TEST_CASE("threshold_for matches the paper operating point") {
    CHECK(std::abs(threshold_for({19, 0.005}) - 38.58) < 0.01);

    const double v = threshold_for({9, 0.005});
    CHECK(chi2_cdf(v, 9) == doctest::Approx(0.995).epsilon(1e-6));

    // alpha -> 1 pushes the threshold toward zero.
    double prev = threshold_for({19, 0.5});
    for (double alpha : {0.9, 0.99, 0.9999, 0.999999}) {
        const double cur = threshold_for({19, alpha});
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(threshold_for({1, 0.999999}) < 1e-5);
    CHECK_THROWS_AS(threshold_for({19, 0.0}), std::invalid_argument);
}

TEST_CASE("round trip inv(cdf(x)) across dof") {
    for (Index dof : {1, 2, 3, 5, 8, 13, 21, 34, 64}) {
        for (double x : {0.1, 0.5, 1.0, 3.0, 10.0, 42.0, 120.0, 200.0}) {
            const double p = chi2_cdf(x, dof);
            // Once p crowds the top of the double grid, x is no longer
            // recoverable from it at all; stay where p carries the
            // information the round trip needs.
            if (p >= 1.0 - 1e-9) continue;
            const double back = chi2_inv(p, dof);
            CHECK(std::abs(back - x) <= 1e-6 * x);
        }
    }
}

TEST_CASE("cdf strictly increasing until it saturates") {
    for (Index dof : {1, 4, 19}) {
        double prev = chi2_cdf(0.05, dof);
        for (double x = 0.1; x < 80.0; x += 0.5) {
            const double cur = chi2_cdf(x, dof);
            if (cur >= 1.0 - 1e-14) break;
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("density integrates to the dof mean") {
    for (Index dof : {2, 5, 19}) {
        const double k = static_cast<double>(dof);
        const double upper = k + 60.0 * std::sqrt(2.0 * k) + 60.0;
        const double mean = oracle::integrate(
            [k](double t) { return t * oracle::chi2_density(t, k); }, 1e-300, upper, 1e-10);
        CHECK(std::abs(mean - k) < 1e-6);
    }
}

} // TEST_SUITE
