#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "hardedge/numerics/quadrature.hpp"
#include "hardedge/specialfn/erfc.hpp"

namespace hardedge::specialfn {

/// The five regularized erfc integrals
///   I  = int { y h(y)       - 1_{y>0} (y^2 + 1/2) } dy
///   I1 = int { h(y)         - 1_{y>0} (y + y / (2 (1 + y^2))) } dy
///   I2 = int { y^3 h(y)     - 1_{y>0} (y^4 + y^2/2 - 1/2) } dy
///   I3 = int { h(y)^2       - 1_{y>0} (y^2 + 1) } dy
///   I4 = int { (y h(y))^2   - 1_{y>0} (y^4 + y^2 - 3/4) } dy
/// over the real line, with h(y) = exp(-y^2) / (sqrt(pi) erfc(y)).
struct ErfcIntegralConstants {
    double I = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double I4 = 0.0;
};

namespace detail {

inline double erfc_ratio(double y) noexcept
{
    constexpr double rsqrtpi = std::numbers::inv_sqrtpi;
    if (y <= 0.0)
        return rsqrtpi * std::exp(-y * y) / std::erfc(y);
    return rsqrtpi / erfcx(y);
}

// Large-y expansions of the regularized integrands, coefficients of y^-2 .. y^-25
// (tools/gen_erfc_tails.py).
using TailCoeffs = std::array<double, 24>;
inline constexpr std::array<TailCoeffs, 5> erfc_integral_tails = {{
    {-1.0 / 2.0, 0.0, 5.0 / 4.0, 0.0, -37.0 / 8.0, 0.0, 353.0 / 16.0, 0.0, -4081.0 / 32.0, 0.0,
     55205.0 / 64.0, 0.0, -854197.0 / 128.0, 0.0, 14876033.0 / 256.0, 0.0, -288018721.0 / 512.0,
     0.0, 6138913925.0 / 1024.0, 0.0, -142882295557.0 / 2048.0, 0.0, 3606682364513.0 / 4096.0,
     0.0},
    {0.0, 0.0, 0.0, 3.0 / 4.0, 0.0, -33.0 / 8.0, 0.0, 345.0 / 16.0, 0.0, -4065.0 / 32.0, 0.0,
     55173.0 / 64.0, 0.0, -854133.0 / 128.0, 0.0, 14875905.0 / 256.0, 0.0, -288018465.0 / 512.0,
     0.0, 6138913413.0 / 1024.0, 0.0, -142882294533.0 / 2048.0, 0.0, 3606682362465.0 / 4096.0},
    {5.0 / 4.0, 0.0, -37.0 / 8.0, 0.0, 353.0 / 16.0, 0.0, -4081.0 / 32.0, 0.0, 55205.0 / 64.0,
     0.0, -854197.0 / 128.0, 0.0, 14876033.0 / 256.0, 0.0, -288018721.0 / 512.0, 0.0,
     6138913925.0 / 1024.0, 0.0, -142882295557.0 / 2048.0, 0.0, 3606682364513.0 / 4096.0, 0.0,
     -98158402127761.0 / 8192.0, 0.0},
    {-3.0 / 4.0, 0.0, 2.0, 0.0, -31.0 / 4.0, 0.0, 153.0 / 4.0, 0.0, -3629.0 / 16.0, 0.0, 1564.0,
     0.0, -785931.0 / 64.0, 0.0, 6922247.0 / 64.0, 0.0, -270455641.0 / 256.0, 0.0,
     1451408703.0 / 128.0, 0.0, -135899743991.0 / 1024.0, 0.0, 1723243790581.0 / 1024.0, 0.0},
    {2.0, 0.0, -31.0 / 4.0, 0.0, 153.0 / 4.0, 0.0, -3629.0 / 16.0, 0.0, 1564.0, 0.0,
     -785931.0 / 64.0, 0.0, 6922247.0 / 64.0, 0.0, -270455641.0 / 256.0, 0.0,
     1451408703.0 / 128.0, 0.0, -135899743991.0 / 1024.0, 0.0, 1723243790581.0 / 1024.0, 0.0,
     -94162730620293.0 / 4096.0, 0.0},
}};

// int_Y^inf sum_k r_k y^{-k} dy = sum_k r_k Y^{1-k} / (k-1)
inline double tail_integral(const TailCoeffs& r, double Y) noexcept
{
    double sum = 0.0;
    double ypow = 1.0 / Y;  // Y^{1-k} at k = 2
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double k = static_cast<double>(i + 2);
        sum += r[i] * ypow / (k - 1.0);
        ypow /= Y;
    }
    return sum;
}

template <class F>
double regularized_line_integral(F&& integrand, const TailCoeffs& tail)
{
    // exp(-y^2) decay on the left, polynomial-regularized remainder on the right.
    constexpr double left = -12.0;
    constexpr double right = 12.0;
    const double tol = 1e-10;
    const double lhs = numerics::integrate(integrand, left, 0.0, tol, 4).value;
    const double rhs = numerics::integrate(integrand, 0.0, right, tol, 4).value;
    return lhs + rhs + tail_integral(tail, right);
}

}  // namespace detail

/// All five constants to about 1e-11 absolute.
inline ErfcIntegralConstants erfc_integral_constants()
{
    using detail::erfc_integral_tails;
    using detail::erfc_ratio;
    using detail::regularized_line_integral;
    ErfcIntegralConstants c;
    c.I = regularized_line_integral(
        [](double y) { return y * erfc_ratio(y) - (y > 0.0 ? y * y + 0.5 : 0.0); },
        erfc_integral_tails[0]);
    c.I1 = regularized_line_integral(
        [](double y) {
            return erfc_ratio(y) - (y > 0.0 ? y + y / (2.0 * (1.0 + y * y)) : 0.0);
        },
        erfc_integral_tails[1]);
    c.I2 = regularized_line_integral(
        [](double y) {
            const double y2 = y * y;
            return y * y2 * erfc_ratio(y) - (y > 0.0 ? y2 * y2 + 0.5 * y2 - 0.5 : 0.0);
        },
        erfc_integral_tails[2]);
    c.I3 = regularized_line_integral(
        [](double y) {
            const double h = erfc_ratio(y);
            return h * h - (y > 0.0 ? y * y + 1.0 : 0.0);
        },
        erfc_integral_tails[3]);
    c.I4 = regularized_line_integral(
        [](double y) {
            const double yh = y * erfc_ratio(y);
            const double y2 = y * y;
            return yh * yh - (y > 0.0 ? y2 * y2 + y2 - 0.75 : 0.0);
        },
        erfc_integral_tails[4]);
    return c;
}

/// The constant I alone, evaluated once.
inline double erfc_integral_I()
{
    static const double value = erfc_integral_constants().I;
    return value;
}

}  // namespace hardedge::specialfn
