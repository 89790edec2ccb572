#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "hardedge/error.hpp"

namespace hardedge::specialfn {

/// Purely imaginary modular parameter tau = i * tau_im.
struct ThetaParams {
    double tau_im = 1.0;
    double truncation_tol = 1e-18;

    ThetaParams() = default;
    explicit ThetaParams(double tau_imag, double tol = 1e-18) : tau_im(tau_imag), truncation_tol(tol)
    {
        if (!(tau_im > 0.0) || !std::isfinite(tau_im))
            throw DomainError("ThetaParams: Im(tau) must be positive and finite");
        if (!(truncation_tol > 0.0))
            throw DomainError("ThetaParams: truncation tolerance must be positive");
    }

    [[nodiscard]] std::complex<double> tau() const noexcept { return {0.0, tau_im}; }
};

/// theta and its first two logarithmic derivatives at a real point.
struct ThetaEval {
    double log_value = 0.0;
    double dlog = 0.0;   // (ln theta)'
    double d2log = 0.0;  // (ln theta)''

    [[nodiscard]] double value() const noexcept { return std::exp(log_value); }
};

/// Crossover between the q-series and the modular-transformed series.
inline constexpr double theta_modular_crossover = 1.0;

namespace detail {

inline double reduce_unit(double z) noexcept { return z - std::nearbyint(z); }

}  // namespace detail

/// theta(z; i t) = 1 + 2 sum_{l>=1} q^{l^2} cos(2 pi l z), q = exp(-pi t), with
/// termwise derivatives. Converges fast for t >= 1.
inline ThetaEval jacobi_theta_series(double z, const ThetaParams& p)
{
    constexpr double pi = std::numbers::pi;
    const double x = detail::reduce_unit(z);
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (int l = 1; l < 100000; ++l) {
        const double w = std::exp(-pi * p.tau_im * l * static_cast<double>(l));
        const double k = 2.0 * pi * l;
        if (w * k * k < p.truncation_tol)
            break;
        const double c = std::cos(k * x);
        const double s = std::sin(k * x);
        s0 += w * c;
        s1 -= w * k * s;
        s2 -= w * k * k * c;
    }
    const double theta = 1.0 + 2.0 * s0;
    const double d1 = 2.0 * s1 / theta;
    return {std::log1p(2.0 * s0), d1, 2.0 * s2 / theta - d1 * d1};
}

/// theta(z; i t) = t^{-1/2} sum_l exp(-pi (l - z)^2 / t), the image of the
/// series under tau -> -1/tau. Converges fast for small t.
inline ThetaEval jacobi_theta_modular(double z, const ThetaParams& p)
{
    constexpr double pi = std::numbers::pi;
    const double t = p.tau_im;
    const double x = detail::reduce_unit(z);
    double s0 = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    // x in [-1/2, 1/2]: terms decrease monotonically away from l = 0.
    auto add = [&](int l) {
        const double y = l - x;
        const double w = std::exp(-pi * y * y / t);
        const double g = 2.0 * pi * y / t;
        s0 += w;
        s1 += g * w;
        s2 += (g * g - 2.0 * pi / t) * w;
        return w * (1.0 + g * g);
    };
    add(0);
    for (int l = 1; l < 100000; ++l) {
        const double hi = add(l);
        const double lo = add(-l);
        if (hi + lo < p.truncation_tol * s0)
            break;
    }
    const double d1 = s1 / s0;
    return {std::log(s0) - 0.5 * std::log(t), d1, s2 / s0 - d1 * d1};
}

/// theta(z; tau) with tau = i * tau_im, choosing the faster converging form.
inline ThetaEval theta_eval(double z, const ThetaParams& p)
{
    return p.tau_im >= theta_modular_crossover ? jacobi_theta_series(z, p)
                                               : jacobi_theta_modular(z, p);
}

inline double jacobi_theta(double z, const ThetaParams& p) { return theta_eval(z, p).value(); }
inline double log_jacobi_theta(double z, const ThetaParams& p) { return theta_eval(z, p).log_value; }
inline double log_theta_d1(double z, const ThetaParams& p) { return theta_eval(z, p).dlog; }
inline double log_theta_d2(double z, const ThetaParams& p) { return theta_eval(z, p).d2log; }

/// Direct summation of sum_l exp(pi i l^2 tau + 2 pi i l z) at complex z.
inline std::complex<double> jacobi_theta_complex(std::complex<double> z, const ThetaParams& p)
{
    constexpr double pi = std::numbers::pi;
    const std::complex<double> i{0.0, 1.0};
    auto term = [&](int l) {
        return std::exp(-pi * p.tau_im * l * static_cast<double>(l) + 2.0 * pi * i * static_cast<double>(l) * z);
    };
    std::complex<double> sum = term(0);
    double peak = std::abs(sum);
    // Terms peak near l = -Im(z)/tau_im; stop once both sides are past it and small.
    const int centre = static_cast<int>(std::lround(-z.imag() / p.tau_im));
    for (int l = 1; l < 100000; ++l) {
        const std::complex<double> a = term(l);
        const std::complex<double> b = term(-l);
        sum += a + b;
        peak = std::max({peak, std::abs(a), std::abs(b)});
        if (l > std::abs(centre) + 1 && std::abs(a) + std::abs(b) < p.truncation_tol * peak)
            break;
    }
    return sum;
}

/// Jacobi triple product
/// theta(z) = prod_{n>=1} (1 - q^{2n}) (1 + 2 q^{2n-1} cos(2 pi z) + q^{4n-2}).
inline double jacobi_theta_triple_product(double z, const ThetaParams& p)
{
    const double q = std::exp(-std::numbers::pi * p.tau_im);
    const double c = std::cos(2.0 * std::numbers::pi * z);
    double log_prod = 0.0;
    for (int n = 1; n < 1000000; ++n) {
        const double q2n = std::pow(q, 2.0 * n);
        const double q2n1 = std::pow(q, 2.0 * n - 1.0);
        log_prod += std::log1p(-q2n) + std::log1p(q2n1 * (2.0 * c + q2n1));
        if (q2n1 < p.truncation_tol * 1e-3)
            break;
    }
    return std::exp(log_prod);
}

/// theta_1(z; tau) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z) and its
/// first three z-derivatives, at complex z.
struct Theta1Eval {
    std::complex<double> value, d1, d2, d3;
};

inline Theta1Eval jacobi_theta1(std::complex<double> z, const ThetaParams& p)
{
    constexpr double pi = std::numbers::pi;
    Theta1Eval r{};
    const double growth = std::abs(z.imag());
    for (int n = 0; n < 100000; ++n) {
        const double h = n + 0.5;
        const double k = (2.0 * n + 1.0) * pi;
        const double w = (n % 2 == 0 ? 2.0 : -2.0) * std::exp(-pi * p.tau_im * h * h);
        const std::complex<double> s = std::sin(k * z);
        const std::complex<double> c = std::cos(k * z);
        r.value += w * s;
        r.d1 += w * k * c;
        r.d2 -= w * k * k * s;
        r.d3 -= w * k * k * k * c;
        // |sin|, |cos| <= exp(k |Im z|)
        if (std::fabs(w) * std::exp(k * growth) * k * k * k <
                p.truncation_tol * std::max(std::abs(r.d2), 1e-300) &&
            n > 2)
            break;
    }
    return r;
}

/// Normalization constant c = theta_1'''(0) / (3 theta_1'(0)).
inline double weierstrass_c(const ThetaParams& p)
{
    const Theta1Eval t = jacobi_theta1({0.0, 0.0}, p);
    return (t.d3 / (3.0 * t.d1)).real();
}

/// Weierstrass p-function with periods 1 and tau,
/// p(w) = c - (d^2/dw^2) ln theta_1(w).
inline std::complex<double> weierstrass_p(std::complex<double> w, const ThetaParams& p)
{
    const double k = std::nearbyint(w.imag() / p.tau_im);
    const double m = std::nearbyint(w.real());
    const std::complex<double> lattice{m, k * p.tau_im};
    if (std::abs(w - lattice) < 1e-8)
        throw DomainError("weierstrass_p: argument within 1e-8 of a lattice pole");
    // Reduce into the fundamental cell around the origin.
    const std::complex<double> red = w - lattice;
    const Theta1Eval t = jacobi_theta1(red, p);
    const std::complex<double> g = t.d1 / t.value;
    const std::complex<double> d2 = t.d2 / t.value - g * g;
    return weierstrass_c(p) - d2;
}

/// p(x + tau/2) for real x; real on this horizontal line.
inline double weierstrass_p_half_period(double x, const ThetaParams& p)
{
    return weierstrass_p({x, 0.5 * p.tau_im}, p).real();
}

}  // namespace hardedge::specialfn
