#pragma once

// Exact binomial tail machinery: regularized incomplete beta, binomial CDF/SF,
// and the Clopper-Pearson interval obtained by inverting the tail tests with
// monotone bisection.

#include <cmath>
#include <string>

#include "nrlab/errors.hpp"

namespace nrlab {

namespace detail {

// Continued fraction for the regularized incomplete beta (Lentz's method).
inline double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    constexpr int max_iter = 500;

    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= max_iter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b), the CDF of Beta(a, b) at x.
inline double beta_inc(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw NumericError("beta_inc: shape parameters must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
    // Symmetry keeps the continued fraction in its fast-converging region.
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * detail::beta_cf(a, b, x) / a;
    }
    return 1.0 - std::exp(log_front) * detail::beta_cf(b, a, 1.0 - x) / b;
}

// P(X <= x) for X ~ Binomial(n, p).
inline double binomial_cdf(long long n, double p, long long x) {
    if (x < 0) return 0.0;
    if (x >= n) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    return beta_inc(static_cast<double>(n - x), static_cast<double>(x + 1), 1.0 - p);
}

// P(X >= x) for X ~ Binomial(n, p).
inline double binomial_sf(long long n, double p, long long x) {
    if (x <= 0) return 1.0;
    if (x > n) return 0.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return beta_inc(static_cast<double>(x), static_cast<double>(n - x + 1), p);
}

struct Interval {
    double low = 0.0;
    double high = 1.0;
};

// Exact two-sided Clopper-Pearson interval for x successes in n trials.
//
// The lower endpoint solves P(X >= x | p) = (1 - level)/2 and the upper
// endpoint solves P(X <= x | p) = (1 - level)/2, with the 0/1 clamps at
// x = 0 and x = n. Both tails are monotone in p, so plain bisection on the
// exact CDF converges to well below the 1e-10 contract.
inline Interval clopper_pearson(long long x, long long n, double level) {
    if (n < 1 || x < 0 || x > n) {
        throw NumericError("clopper_pearson: need 0 <= x <= n and n >= 1 (got x=" +
                           std::to_string(x) + ", n=" + std::to_string(n) + ")");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw NumericError("clopper_pearson: level must lie in (0, 1)");
    }
    const double tail = (1.0 - level) / 2.0;
    constexpr double tol = 1e-13;

    Interval ci;
    if (x == 0) {
        ci.low = 0.0;
    } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            // P(X >= x | p) grows with p.
            (binomial_sf(n, mid, x) < tail ? lo : hi) = mid;
        }
        ci.low = 0.5 * (lo + hi);
    }
    if (x == n) {
        ci.high = 1.0;
    } else {
        double lo = 0.0, hi = 1.0;
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            // P(X <= x | p) falls as p grows.
            (binomial_cdf(n, mid, x) > tail ? lo : hi) = mid;
        }
        ci.high = 0.5 * (lo + hi);
    }
    return ci;
}

}  // namespace nrlab
