#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nrlab/exact.hpp"
#include "nrlab/format.hpp"

using namespace nrlab;

namespace {

// Independent tail oracle for small n: direct summation of binomial pmf terms.
double cdf_by_summation(long long n, double p, long long x) {
    double total = 0.0;
    for (long long j = 0; j <= x && j <= n; ++j) {
        double log_term = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                          std::lgamma(n - j + 1.0);
        if (j > 0) log_term += j * std::log(p);
        if (n - j > 0) log_term += (n - j) * std::log1p(-p);
        total += std::exp(log_term);
    }
    return total;
}

}  // namespace

TEST_CASE("binomial tails agree with direct summation") {
    for (long long n : {1LL, 5LL, 12LL, 20LL}) {
        for (double p : {0.01, 0.2, 0.5, 0.77, 0.99}) {
            for (long long x = 0; x <= n; ++x) {
                REQUIRE(binomial_cdf(n, p, x) ==
                        Catch::Approx(cdf_by_summation(n, p, x)).margin(1e-12));
                REQUIRE(binomial_sf(n, p, x) ==
                        Catch::Approx(1.0 - cdf_by_summation(n, p, x - 1)).margin(1e-12));
            }
        }
    }
}

TEST_CASE("clopper_pearson reproduces the published bullet-study interval") {
    Interval ci = clopper_pearson(20, 2842, 0.95);
    // Frozen from an independent beta-quantile evaluation.
    REQUIRE(ci.low == Catch::Approx(0.004303707847473833).margin(1e-10));
    REQUIRE(ci.high == Catch::Approx(0.010847707672545394).margin(1e-10));

    REQUIRE(format_percent1(20.0 / 2842.0) == "0.7");
    REQUIRE(format_percent1(ci.low) == "0.4");
    REQUIRE(format_percent1(ci.high) == "1.1");
}

TEST_CASE("clopper_pearson boundary cases") {
    for (long long n : {1LL, 7LL, 20LL, 100LL}) {
        REQUIRE(clopper_pearson(0, n, 0.95).low == 0.0);
        REQUIRE(clopper_pearson(n, n, 0.95).high == 1.0);
    }
    // Closed-form zero-success bound: high = 1 - (alpha/2)^(1/n).
    REQUIRE(clopper_pearson(0, 20, 0.95).high ==
            Catch::Approx(1.0 - std::pow(0.025, 1.0 / 20.0)).margin(1e-10));
    REQUIRE(clopper_pearson(20, 20, 0.95).low ==
            Catch::Approx(std::pow(0.025, 1.0 / 20.0)).margin(1e-10));
}

TEST_CASE("clopper_pearson derived fixture x=3 n=10") {
    Interval ci = clopper_pearson(3, 10, 0.95);
    REQUIRE(ci.low == Catch::Approx(0.0667395111777345).margin(1e-10));
    REQUIRE(ci.high == Catch::Approx(0.6524528500599973).margin(1e-10));
}

TEST_CASE("interval endpoints satisfy the exact tail equations for n <= 30") {
    const double level = 0.95;
    const double tail = 0.025;
    for (long long n = 1; n <= 30; ++n) {
        for (long long x = 0; x <= n; ++x) {
            Interval ci = clopper_pearson(x, n, level);
            double point = static_cast<double>(x) / static_cast<double>(n);
            REQUIRE(ci.low <= point + 1e-12);
            REQUIRE(ci.high >= point - 1e-12);
            if (x > 0) {
                REQUIRE(binomial_sf(n, ci.low, x) == Catch::Approx(tail).margin(1e-8));
            }
            if (x < n) {
                REQUIRE(binomial_cdf(n, ci.high, x) == Catch::Approx(tail).margin(1e-8));
            }
        }
    }
}

TEST_CASE("interval endpoints are monotone in x") {
    for (long long n : {9LL, 25LL}) {
        double prev_low = -1.0, prev_high = -1.0;
        for (long long x = 0; x <= n; ++x) {
            Interval ci = clopper_pearson(x, n, 0.95);
            REQUIRE(ci.low >= prev_low);
            REQUIRE(ci.high >= prev_high);
            prev_low = ci.low;
            prev_high = ci.high;
        }
    }
}

TEST_CASE("higher confidence widens the interval") {
    Interval narrow = clopper_pearson(7, 40, 0.90);
    Interval wide = clopper_pearson(7, 40, 0.99);
    REQUIRE(wide.low < narrow.low);
    REQUIRE(wide.high > narrow.high);
}

TEST_CASE("clopper_pearson rejects invalid arguments") {
    REQUIRE_THROWS_AS(clopper_pearson(-1, 10, 0.95), NumericError);
    REQUIRE_THROWS_AS(clopper_pearson(11, 10, 0.95), NumericError);
    REQUIRE_THROWS_AS(clopper_pearson(0, 0, 0.95), NumericError);
    REQUIRE_THROWS_AS(clopper_pearson(3, 10, 0.0), NumericError);
    REQUIRE_THROWS_AS(clopper_pearson(3, 10, 1.0), NumericError);
}
