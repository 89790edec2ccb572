#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hardedge/error.hpp"
#include "hardedge/model.hpp"
#include "hardedge/numerics/finite_difference.hpp"
#include "hardedge/numerics/quadrature.hpp"
#include "hardedge/specialfn/erfc_integrals.hpp"
#include "hardedge/specialfn/theta.hpp"

namespace hardedge {

namespace detail {

// b (1 - exp(-t d / b)) / t, equal to d at t = 0.
inline double decay_integral(double t, double d, double b) noexcept
{
    if (t == 0.0)
        return d;
    return -b * std::expm1(-t * d / b) / t;
}

// (exp(-t d / b) - 1) / d, equal to -t/b at d = 0.
inline double expm1_ratio(double t, double d, double b) noexcept
{
    if (d == 0.0)
        return -t / b;
    return std::expm1(-t * d / b) / d;
}

// Panel count for the fixed composite rule. Depends on t only, so the
// constants are smooth in u.
inline std::size_t panels_for(const ModelParams& params, double t_max)
{
    const double width = params.x_outer() - params.x_inner();
    const double stiffness = t_max * width / params.b;
    return static_cast<std::size_t>(std::clamp(std::ceil(2.0 * stiffness), 8.0, 512.0));
}

inline double max_t(const ObservableGrid& grid)
{
    return *std::max_element(grid.t.begin(), grid.t.end());
}

}  // namespace detail

/// Theta-side data shared by F_n and the oscillatory moment terms.
struct ThetaSlice {
    specialfn::ThetaParams params;
    double L = 0.0;       // ln(rho2/rho1)
    double shift = 0.0;   // 1/2 - alpha + ln(sigma2/sigma1) / (2L)
    double c_const = 0.0; // theta_1'''(0) / (3 theta_1'(0))

    /// sigma_star n + shift with sigma_star n reduced mod 1 first.
    [[nodiscard]] double argument(double sigma_star, long n) const
    {
        const double prod = sigma_star * static_cast<double>(n);
        return (prod - std::floor(prod)) + shift;
    }
};

inline ThetaSlice theta_slice(const ModelParams& params, const EquilibriumData& eq)
{
    ThetaSlice s;
    s.L = params.log_ratio();
    s.params = specialfn::ThetaParams(std::numbers::pi / s.L);
    s.shift = 0.5 - params.alpha + std::log(eq.sigma2 / eq.sigma1) / (2.0 * s.L);
    s.c_const = specialfn::weierstrass_c(s.params);
    return s;
}

/// C1 n + C2 ln n + C3 + F_n + C4 / sqrt(n).
struct AsymptoticExpansion {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double C4 = 0.0;
    double lnQ = 0.0;
    double sigma_star = 0.0;
    ThetaSlice theta;

    [[nodiscard]] specialfn::ThetaParams theta_tau() const noexcept { return theta.params; }
    [[nodiscard]] double c_const() const noexcept { return theta.c_const; }

    [[nodiscard]] double F(long n) const
    {
        if (n < 1)
            throw DomainError("F_n: n must be positive");
        if (lnQ == 0.0)
            return 0.0;
        const double z = theta.argument(sigma_star, n);
        return specialfn::log_jacobi_theta(z + lnQ / (2.0 * theta.L), theta.params) -
               specialfn::log_jacobi_theta(z, theta.params);
    }

    [[nodiscard]] double smooth_part(long n) const
    {
        const double nn = static_cast<double>(n);
        return C1 * nn + C2 * std::log(nn) + C3 + C4 / std::sqrt(nn);
    }

    [[nodiscard]] double log_mgf(long n) const { return smooth_part(n) + F(n); }
};

inline AsymptoticExpansion constants(const Observable& obs)
{
    const ModelParams& p = obs.params();
    const ObservableGrid& g = obs.grid();
    const EquilibriumData& eq = obs.eq();
    const Weights& w = obs.weights();
    const double b = p.b;
    const double x1 = obs.x_inner();
    const double x2 = obs.x_outer();
    const double Om = obs.Omega();
    const double L = p.log_ratio();
    const std::size_t panels = detail::panels_for(p, detail::max_t(g));

    double sum_u = 0.0;
    for (double u : g.u)
        sum_u += u;

    const double T1w = obs.T(1, x1) / Om;  // T1(x1) / Omega
    const double T2w = obs.T(2, x1) / Om;
    const double H1w = obs.That(1, x2);
    const double H2w = obs.That(2, x2);

    AsymptoticExpansion e;
    e.sigma_star = eq.sigma_star;
    e.theta = theta_slice(p, eq);
    e.lnQ = std::log(obs.Q());

    const double int1 = numerics::integrate_fixed(
        [&](double x) { return std::log(obs.phi_inner(x)); }, x1, eq.sigma_star, panels);
    const double int2 = numerics::integrate_fixed(
        [&](double x) { return std::log(obs.phi_outer(x)); }, eq.sigma_star, x2, panels);
    e.C1 = x1 * sum_u + int1 + int2;

    e.C2 = -0.5 * x1 * T1w + 0.5 * x2 * H1w;

    // f + x1 T1(x1) / (Omega (x - x1)), with the pole cancelled analytically:
    // T1(x1) phi(x) - Omega T1(x) = (x - x1) sum_l omega_l (T1(x1) - Omega t_l) E_l.
    auto inner_reg = [&](double x) {
        const double d = x - x1;
        double cancel = 0.0;
        for (int l = 0; l < g.m; ++l) {
            const double t = g.t[l];
            cancel += w.omega[l] * (obs.T(1, x1) - Om * t) * detail::expm1_ratio(t, d, b);
        }
        const double phi = obs.phi_inner(x);
        return (-(p.alpha / b) * obs.T(1, x) - x / (2.0 * b) * obs.T(2, x)) / phi +
               x1 * cancel / (Om * phi);
    };
    // fhat - x2 That1(x2) / (x2 - x), likewise:
    // That1(x) - That1(x2) phi(x) = (x2 - x) sum_l omega_l (t_l + That1(x2)) E_l.
    auto outer_reg = [&](double x) {
        const double d = x2 - x;
        double cancel = 0.0;
        for (int l = g.m; l < g.size(); ++l) {
            const double t = g.t[l];
            cancel += w.omega[l] * (t + H1w) * detail::expm1_ratio(t, d, b);
        }
        const double phi = obs.phi_outer(x);
        return (-(p.alpha / b) * obs.That(1, x) + x / (2.0 * b) * obs.That(2, x)) / phi +
               x2 * cancel / phi;
    };
    const double int3 = numerics::integrate_fixed(inner_reg, x1, eq.sigma_star, panels);
    const double int4 = numerics::integrate_fixed(outer_reg, eq.sigma_star, x2, panels);

    const double s2pi = std::sqrt(2.0 * std::numbers::pi);
    const double log_in = std::log(b * std::pow(p.rho1, b) / (s2pi * eq.sigma1));
    const double log_out = std::log(b * std::pow(p.rho2, b) / (s2pi * eq.sigma2));
    const double lq = e.lnQ;
    e.C3 = -0.5 * sum_u - (p.alpha - (2.0 * std::log(eq.sigma2 / eq.sigma1) + lq) / (4.0 * L)) * lq +
           int3 + int4 + x1 * T1w * log_in - x2 * H1w * log_out;

    const double r1b = std::pow(p.rho1, b);
    const double r2b = std::pow(p.rho2, b);
    const double r13 = r1b * r1b * r1b;
    const double r23 = r2b * r2b * r2b;
    e.C4 = std::numbers::sqrt2 * specialfn::erfc_integral_I() * b *
           (r13 * T2w - r1b * T1w - r13 * T1w * T1w - r23 * H2w - r2b * H1w - r23 * H1w * H1w);
    return e;
}

inline AsymptoticExpansion constants(const ModelParams& params, const ObservableGrid& grid)
{
    return constants(Observable(params, grid));
}

inline double F_n(const AsymptoticExpansion& e, long n) { return e.F(n); }

inline double log_mgf_asymptotic(const ModelParams& params, const ObservableGrid& grid, long n)
{
    return constants(params, grid).log_mgf(n);
}

/// b n + c ln n + d + f + e / sqrt(n), the shape shared by the first and
/// second cumulant expansions. f is the oscillatory term at the given n.
struct ExpansionTerms {
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double f = 0.0;
    double e = 0.0;
    long n = 0;

    [[nodiscard]] double value() const
    {
        const double nn = static_cast<double>(n);
        return b * nn + c * std::log(nn) + d + f + e / std::sqrt(nn);
    }
};

namespace detail {

struct MomentContext {
    ModelParams p;
    EquilibriumData eq;
    ThetaSlice theta;
    double x1, x2, L, lsr, I, log_in, log_out;
    double dlog_theta = 0.0;  // (ln theta)' at the shifted argument
    double wp_minus_c = 0.0;  // p(n sigma_star + tau/2 - alpha + ...) - c

    MomentContext(const ModelParams& params, long n)
        : p(params), eq(equilibrium(params)), theta(theta_slice(params, eq))
    {
        x1 = p.x_inner();
        x2 = p.x_outer();
        L = p.log_ratio();
        lsr = std::log(eq.sigma2 / eq.sigma1);
        I = specialfn::erfc_integral_I();
        const double s2pi = std::sqrt(2.0 * std::numbers::pi);
        log_in = std::log(p.b * std::pow(p.rho1, p.b) / (s2pi * eq.sigma1));
        log_out = std::log(p.b * std::pow(p.rho2, p.b) / (s2pi * eq.sigma2));
        const double z = theta.argument(eq.sigma_star, n);
        dlog_theta = specialfn::log_theta_d1(z, theta.params);
        // p(x + tau/2) with x = z - 1/2; p is even and 1-periodic on this line.
        wp_minus_c = specialfn::weierstrass_p_half_period(z - 0.5, theta.params) - theta.c_const;
    }

    std::size_t panels(double t) const { return panels_for(p, t); }
};

}  // namespace detail

/// Expectation of N(r_l) (l is 0-based).
inline ExpansionTerms expectation_asymptotics(const ModelParams& params, const ObservableGrid& grid,
                                              int l, long n)
{
    grid.validate();
    if (l < 0 || l >= grid.size())
        throw DomainError("expectation_asymptotics: index out of range");
    const detail::MomentContext k(params, n);
    const double b = params.b;
    const double a = params.alpha;
    const double t = grid.t[l];
    const double sqrt2I = std::numbers::sqrt2 * k.I;
    ExpansionTerms r;
    r.n = n;
    if (grid.is_inner(l)) {
        const double s1 = k.eq.sigma1;
        const double decay = std::exp(-t * s1 / b);
        r.b = k.x1 + detail::decay_integral(t, s1, b);
        r.c = -k.x1 * t / 2.0;
        const double integral = numerics::integrate_fixed(
            [&](double x) {
                const double d = x - k.x1;
                return -k.x1 * t * detail::expm1_ratio(t, d, b) -
                       std::exp(-t * d / b) * t * (2.0 * a + x * t) / (2.0 * b);
            },
            k.x1, k.eq.sigma_star, k.panels(t));
        r.d = -0.5 - decay * (a - k.lsr / (2.0 * k.L)) + k.x1 * t * k.log_in + integral;
        r.f = decay / (2.0 * k.L) * k.dlog_theta;
        r.e = sqrt2I * b * std::pow(params.rho1, b) * t * (params.rho1_pow() * t - 1.0);
    } else {
        const double s2 = k.eq.sigma2;
        const double decay = std::exp(-t * s2 / b);
        r.b = k.x2 - detail::decay_integral(t, s2, b);
        r.c = k.x2 * t / 2.0;
        const double integral = numerics::integrate_fixed(
            [&](double x) {
                const double d = k.x2 - x;
                return -k.x2 * t * detail::expm1_ratio(t, d, b) +
                       std::exp(-t * d / b) * t * (2.0 * a - x * t) / (2.0 * b);
            },
            k.eq.sigma_star, k.x2, k.panels(t));
        r.d = -0.5 - decay * (a - k.lsr / (2.0 * k.L)) - k.x2 * t * k.log_out - integral;
        r.f = decay / (2.0 * k.L) * k.dlog_theta;
        r.e = -sqrt2I * b * std::pow(params.rho2, b) * t * (params.rho2_pow() * t + 1.0);
    }
    return r;
}

/// Covariance of N(r_l) and N(r_k) (0-based, any order).
inline ExpansionTerms covariance_asymptotics(const ModelParams& params, const ObservableGrid& grid,
                                             int l, int k, long n)
{
    grid.validate();
    if (l < 0 || k < 0 || l >= grid.size() || k >= grid.size())
        throw DomainError("covariance_asymptotics: index out of range");
    if (l > k)
        std::swap(l, k);
    const detail::MomentContext ctx(params, n);
    const double b = params.b;
    const double a = params.alpha;
    const double L = ctx.L;
    const double sqrt2I = std::numbers::sqrt2 * ctx.I;
    const double tl = grid.t[l];
    const double tk = grid.t[k];
    const double ts = tl + tk;
    ExpansionTerms r;
    r.n = n;

    if (grid.is_inner(l) && grid.is_inner(k)) {
        const double s1 = ctx.eq.sigma1;
        const double x1 = ctx.x1;
        r.b = tk > 0.0 ? detail::decay_integral(tl, s1, b) - detail::decay_integral(ts, s1, b) : 0.0;
        r.c = x1 * tk / 2.0;
        const double integral = numerics::integrate_fixed(
            [&](double x) {
                const double d = x - x1;
                const double el = std::exp(-tl * d / b);
                const double es = std::exp(-ts * d / b);
                return x1 * tk * detail::expm1_ratio(ts, d, b) +
                       (x * tk * tk + 2.0 * a * tk) / (2.0 * b) * es +
                       tl * el * detail::expm1_ratio(tk, d, b) * x1 -
                       tl * (el - es) * (2.0 * a + x * tl) / (2.0 * b);
            },
            x1, ctx.eq.sigma_star, ctx.panels(ts));
        r.d = -std::exp(-tl * s1 / b) * (a - ctx.lsr / (2.0 * L)) +
              std::exp(-ts * s1 / b) * (a - (ctx.lsr - 1.0) / (2.0 * L)) + integral -
              x1 * tk * ctx.log_in;
        r.f = -std::exp(-ts * s1 / b) / (4.0 * L * L) *
              (ctx.wp_minus_c - 2.0 * std::expm1(tk * s1 / b) * L * ctx.dlog_theta);
        r.e = sqrt2I * b * std::pow(params.rho1, b) * tk * (1.0 - params.rho1_pow() * (2.0 * tl + tk));
    } else if (!grid.is_inner(l) && !grid.is_inner(k)) {
        const double s2 = ctx.eq.sigma2;
        const double x2 = ctx.x2;
        r.b = tl > 0.0 ? detail::decay_integral(tk, s2, b) - detail::decay_integral(ts, s2, b) : 0.0;
        r.c = x2 * tl / 2.0;
        const double integral = numerics::integrate_fixed(
            [&](double x) {
                const double d = x2 - x;
                const double ek = std::exp(-tk * d / b);
                const double es = std::exp(-ts * d / b);
                return x2 * tl * detail::expm1_ratio(ts, d, b) +
                       (x * tl * tl - 2.0 * a * tl) / (2.0 * b) * es +
                       tk * ek * detail::expm1_ratio(tl, d, b) * x2 +
                       tk * (ek - es) * (2.0 * a - x * tk) / (2.0 * b);
            },
            ctx.eq.sigma_star, x2, ctx.panels(ts));
        r.d = std::exp(-tk * s2 / b) * (a - ctx.lsr / (2.0 * L)) -
              std::exp(-ts * s2 / b) * (a - (ctx.lsr + 1.0) / (2.0 * L)) + integral -
              x2 * tl * ctx.log_out;
        r.f = -std::exp(-ts * s2 / b) / (4.0 * L * L) *
              (ctx.wp_minus_c + 2.0 * std::expm1(tl * s2 / b) * L * ctx.dlog_theta);
        r.e = -sqrt2I * b * std::pow(params.rho2, b) * tl * (1.0 + params.rho2_pow() * (tl + 2.0 * tk));
    } else {
        const double decay =
            std::exp(-tl * ctx.eq.sigma1 / b) * std::exp(-tk * ctx.eq.sigma2 / b);
        r.d = decay / (2.0 * L);
        r.f = -decay / (4.0 * L * L) * ctx.wp_minus_c;
    }
    return r;
}

/// Limiting correlation matrix of the standardized counts; needs t_m, t_{m+1} > 0.
inline std::vector<std::vector<double>> clt_covariance(const ModelParams& params,
                                                       const ObservableGrid& grid)
{
    grid.validate();
    const int m = grid.m;
    if (!(grid.t[m - 1] > 0.0) || !(grid.t[m] > 0.0))
        throw DomainError("clt_covariance: requires t_m > 0 and t_{m+1} > 0");
    const int c = grid.size();
    std::vector<double> diag(c);
    for (int l = 0; l < c; ++l)
        diag[l] = covariance_asymptotics(params, grid, l, l, 1).b;
    std::vector<std::vector<double>> sigma(c, std::vector<double>(c, 0.0));
    for (int l = 0; l < c; ++l) {
        sigma[l][l] = 1.0;
        for (int k = l + 1; k < c; ++k) {
            if (grid.is_inner(l) != grid.is_inner(k))
                continue;
            const double v = covariance_asymptotics(params, grid, l, k, 1).b / std::sqrt(diag[l] * diag[k]);
            sigma[l][k] = sigma[k][l] = v;
        }
    }
    return sigma;
}

/// u-derivatives at u = 0 of every piece of the expansion, by central
/// differences with one Richardson step.
struct ExpansionDerivatives {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double C4 = 0.0;
    double F = 0.0;
    long n = 0;

    [[nodiscard]] double value() const
    {
        const double nn = static_cast<double>(n);
        return C1 * nn + C2 * std::log(nn) + C3 + F + C4 / std::sqrt(nn);
    }
};

inline constexpr int max_cumulant_order = 4;

inline double cumulant_step(int order)
{
    static constexpr double steps[] = {1e-3, 1e-2, 3e-2, 6e-2};
    return steps[order - 1];
}

inline ExpansionDerivatives expansion_derivatives(const ModelParams& params,
                                                  const ObservableGrid& grid,
                                                  std::span<const int> orders, long n)
{
    grid.validate();
    if (orders.size() != grid.t.size())
        throw DomainError("expansion_derivatives: multi-index must have 2m entries");
    int total = 0;
    for (int o : orders) {
        if (o < 0)
            throw DomainError("expansion_derivatives: negative order");
        total += o;
    }
    if (total < 1)
        throw DomainError("expansion_derivatives: order must be at least 1");
    if (total > max_cumulant_order)
        throw DomainError("expansion_derivatives: orders above 4 are not supported");
    const std::vector<double> zero(grid.size(), 0.0);
    const double h = cumulant_step(total);
    auto piece = [&](auto select) {
        return numerics::mixed_partial(
            [&](const std::vector<double>& u) {
                return select(constants(Observable(params, grid.with_u(u))));
            },
            zero, orders, h);
    };
    ExpansionDerivatives d;
    d.n = n;
    d.C1 = piece([](const AsymptoticExpansion& e) { return e.C1; });
    d.C2 = piece([](const AsymptoticExpansion& e) { return e.C2; });
    d.C3 = piece([](const AsymptoticExpansion& e) { return e.C3; });
    d.C4 = piece([](const AsymptoticExpansion& e) { return e.C4; });
    d.F = piece([n](const AsymptoticExpansion& e) { return e.F(n); });
    return d;
}

/// Joint cumulant of order j (a multi-index over the 2m counts). Orders 1 and
/// 2 use the closed-form moment expansions; higher orders differentiate the
/// expansion numerically.
inline double cumulant_asymptotics(const ModelParams& params, const ObservableGrid& grid,
                                   std::span<const int> orders, long n)
{
    grid.validate();
    if (orders.size() != grid.t.size())
        throw DomainError("cumulant_asymptotics: multi-index must have 2m entries");
    std::vector<int> idx;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 0)
            throw DomainError("cumulant_asymptotics: negative order");
        for (int r = 0; r < orders[i]; ++r)
            idx.push_back(static_cast<int>(i));
    }
    if (idx.empty())
        throw DomainError("cumulant_asymptotics: order must be at least 1");
    if (idx.size() == 1)
        return expectation_asymptotics(params, grid, idx[0], n).value();
    if (idx.size() == 2)
        return covariance_asymptotics(params, grid, idx[0], idx[1], n).value();
    return expansion_derivatives(params, grid, orders, n).value();
}

}  // namespace hardedge
