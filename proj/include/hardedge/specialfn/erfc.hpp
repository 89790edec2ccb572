#pragma once

#include <cmath>
#include <numbers>

namespace hardedge::specialfn {

/// Scaled complementary error function exp(x^2) erfc(x).
inline double erfcx(double x) noexcept
{
    if (x < 0.0) {
        // 2 exp(x^2) - erfcx(-x); overflows to +inf below about -26.6.
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return 2.0 * std::exp(hi) * (1.0 + lo) - erfcx(-x);
    }
    if (x < 10.0) {
        // x*x split into hi + lo so exp(x^2) keeps full relative accuracy.
        const double hi = x * x;
        const double lo = std::fma(x, x, -hi);
        return std::exp(hi) * (1.0 + lo) * std::erfc(x);
    }
    // Asymptotic series; at x >= 10 the 24th term is below 1e-25.
    const double w = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n <= 24; ++n) {
        term *= -(2.0 * n - 1.0) * w;
        sum += term;
    }
    return sum / (x * std::sqrt(std::numbers::pi));
}

/// ln erfc(x) without underflow for large positive x.
inline double log_erfc(double x) noexcept
{
    if (std::fabs(x) < 0.5)
        return std::log1p(-std::erf(x));
    if (x > 0.0)
        return std::log(erfcx(x)) - x * x;
    // erfc(x) = 2 - erfc(-x) for negative x
    return std::numbers::ln2 + std::log1p(-0.5 * std::erfc(-x));
}

}  // namespace hardedge::specialfn
