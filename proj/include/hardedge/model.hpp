#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "hardedge/error.hpp"

namespace hardedge {

/// Mittag-Leffler ensemble |z|^{2b} - (2 alpha / n) ln|z| with a hard wall
/// removing the annulus rho1 < |z| < rho2.
struct ModelParams {
    double b = 1.0;
    double alpha = 0.0;
    double rho1 = 0.6;
    double rho2 = 0.8;

    /// Throws DomainError unless b > 0, alpha > -1 and
    /// 0 < rho1 < rho2 < b^{-1/(2b)}.
    void validate() const
    {
        if (!(b > 0.0) || !std::isfinite(b))
            throw DomainError("ModelParams: b must be positive");
        if (!(alpha > -1.0) || !std::isfinite(alpha))
            throw DomainError("ModelParams: alpha must exceed -1");
        if (!(rho1 > 0.0) || !(rho2 > rho1))
            throw DomainError("ModelParams: need 0 < rho1 < rho2");
        if (!(rho2 < droplet_radius()))
            throw DomainError("ModelParams: rho2 must be below the droplet radius b^{-1/(2b)} = " +
                              std::to_string(droplet_radius()));
    }

    [[nodiscard]] double droplet_radius() const { return std::pow(b, -1.0 / (2.0 * b)); }
    /// ln(rho2 / rho1)
    [[nodiscard]] double log_ratio() const { return std::log(rho2 / rho1); }
    /// rho^{2b}
    [[nodiscard]] double rho1_pow() const { return std::pow(rho1, 2.0 * b); }
    [[nodiscard]] double rho2_pow() const { return std::pow(rho2, 2.0 * b); }
    /// Inner and outer wall values b rho^{2b} of the x variable.
    [[nodiscard]] double x_inner() const { return b * rho1_pow(); }
    [[nodiscard]] double x_outer() const { return b * rho2_pow(); }
};

/// Parameters shared by Figure-style experiments: rho1 = 3/5 and rho2 = 4/5 of the
/// droplet radius.
inline ModelParams figure_params(double b, double alpha = 0.0)
{
    const double r = std::pow(b, -1.0 / (2.0 * b));
    return {b, alpha, 0.6 * r, 0.8 * r};
}

/// (m, t, u): 2m radii merging with the walls at rate 1/n and their MGF exponents.
struct ObservableGrid {
    int m = 1;
    std::vector<double> t;
    std::vector<double> u;

    /// t1 > ... > tm >= 0, 0 <= t_{m+1} < ... < t_{2m}, finite u.
    void validate() const
    {
        if (m < 1)
            throw DomainError("ObservableGrid: m must be positive");
        const auto size = static_cast<std::size_t>(2 * m);
        if (t.size() != size || u.size() != size)
            throw DomainError("ObservableGrid: t and u must both have 2m = " +
                              std::to_string(size) + " entries");
        for (std::size_t i = 0; i < size; ++i) {
            if (!(t[i] >= 0.0) || !std::isfinite(t[i]))
                throw DomainError("ObservableGrid: t entries must be finite and nonnegative");
            if (!std::isfinite(u[i]))
                throw DomainError("ObservableGrid: u entries must be finite");
        }
        for (int l = 1; l < m; ++l)
            if (!(t[l - 1] > t[l]))
                throw DomainError("ObservableGrid: need t1 > t2 > ... > tm");
        for (int l = m + 1; l < 2 * m; ++l)
            if (!(t[l - 1] < t[l]))
                throw DomainError("ObservableGrid: need t_{m+1} < ... < t_{2m}");
    }

    [[nodiscard]] int size() const noexcept { return 2 * m; }
    [[nodiscard]] bool is_inner(int l) const noexcept { return l < m; }  // 0-based

    /// Same radii, different exponents.
    [[nodiscard]] ObservableGrid with_u(std::vector<double> new_u) const
    {
        return {m, t, std::move(new_u)};
    }
};

/// Weights omega_1..omega_{2m} (omega_{2m+1} = 1 is implicit) and
/// Omega = exp(u1 + ... + u2m). Built from suffix sums s_k = u_k + ... + u_{2m}
/// as omega_l = exp(s_{l+1}) expm1(u_l).
struct Weights {
    std::vector<double> omega;
    std::vector<double> suffix;  // s_1 .. s_{2m+1}, s_{2m+1} = 0
    double Omega = 1.0;
};

inline Weights make_weights(const std::vector<double>& u)
{
    const std::size_t k = u.size();
    Weights w;
    w.suffix.assign(k + 1, 0.0);
    for (std::size_t i = k; i-- > 0;)
        w.suffix[i] = w.suffix[i + 1] + u[i];
    w.omega.resize(k);
    for (std::size_t i = 0; i < k; ++i)
        w.omega[i] = std::exp(w.suffix[i + 1]) * std::expm1(u[i]);
    w.Omega = std::exp(w.suffix[0]);
    return w;
}

/// Equilibrium masses: sigma_star on the inner disk, sigma1 and sigma2 on the
/// two wall circles.
struct EquilibriumData {
    double sigma_star = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

inline EquilibriumData equilibrium(const ModelParams& params)
{
    params.validate();
    const double L = params.log_ratio();
    // rho2^{2b} - rho1^{2b} = rho1^{2b} expm1(2 b L), exact as rho2 -> rho1
    const double sigma_star = params.rho1_pow() * std::expm1(2.0 * params.b * L) / (2.0 * L);
    EquilibriumData eq{sigma_star, sigma_star - params.x_inner(), params.x_outer() - sigma_star};
    if (!(eq.sigma1 > 0.0) || !(eq.sigma2 > 0.0))
        throw PrecisionError("equilibrium: nonpositive singular mass");
    return eq;
}

/// Balayage of the annulus part of the unconstrained equilibrium measure onto
/// the two wall circles, from quadrature of the log-kernel moments.
struct BalayageResult {
    double C1 = 0.0;  // 2 int r f(r) ln(1/r) dr over (rho1, rho2)
    double C2 = 0.0;  // 2 int r f(r) dr over (rho1, rho2)
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

namespace detail {

template <class F>
double model_quad(F&& f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0;
    const double value = integrator.integrate(f, a, b, 1e-15, &err);
    if (!(err <= 1e-12 * std::max(1.0, std::fabs(value))))
        throw ConvergenceError("model quadrature did not reach 1e-12");
    return value;
}

}  // namespace detail

inline BalayageResult balayage_radial(const ModelParams& params)
{
    params.validate();
    const double b = params.b;
    // r f(r) with f(r) = b^2 r^{2b-2}
    auto rf = [b](double r) { return b * b * std::pow(r, 2.0 * b - 1.0); };
    BalayageResult res;
    res.C1 = 2.0 * detail::model_quad([&](double r) { return rf(r) * -std::log(r); }, params.rho1,
                                      params.rho2);
    res.C2 = 2.0 * detail::model_quad(rf, params.rho1, params.rho2);
    // sigma1 ln(1/rho1) + sigma2 ln(1/rho2) = C1, sigma1 + sigma2 = C2
    const double L = params.log_ratio();
    res.sigma1 = (res.C1 - res.C2 * -std::log(params.rho2)) / L;
    res.sigma2 = (res.C2 * -std::log(params.rho1) - res.C1) / L;
    return res;
}

/// Mass of mu_h on |z| <= rho1 (inner) and |z| >= rho2 (outer), absolutely
/// continuous part by quadrature plus the circle masses.
struct MassSplit {
    double inner = 0.0;
    double outer = 0.0;
};

inline MassSplit equilibrium_mass_split(const ModelParams& params)
{
    const EquilibriumData eq = equilibrium(params);
    const double b = params.b;
    auto density = [b](double r) { return 2.0 * b * b * std::pow(r, 2.0 * b - 1.0); };
    MassSplit m;
    m.inner = detail::model_quad(density, 0.0, params.rho1) + eq.sigma1;
    m.outer = detail::model_quad(density, params.rho2, params.droplet_radius()) + eq.sigma2;
    return m;
}

/// Log potential at |z| = s of the annulus part mu * 1_G, via the circle
/// average ln(1/max(|z|, r)).
inline double log_potential_annulus_part(const ModelParams& params, double s)
{
    const double b = params.b;
    auto integrand = [&](double r) {
        return 2.0 * b * b * std::pow(r, 2.0 * b - 1.0) * -std::log(std::max(s, r));
    };
    if (s > params.rho1 && s < params.rho2) {
        return detail::model_quad(integrand, params.rho1, s) +
               detail::model_quad(integrand, s, params.rho2);
    }
    return detail::model_quad(integrand, params.rho1, params.rho2);
}

/// Log potential at |z| = s of sigma1 delta_{rho1} + sigma2 delta_{rho2}.
inline double log_potential_balayage(const ModelParams& params, const EquilibriumData& eq, double s)
{
    return eq.sigma1 * -std::log(std::max(s, params.rho1)) +
           eq.sigma2 * -std::log(std::max(s, params.rho2));
}

/// Everything derived from (params, grid) that the engines share: equilibrium
/// data, weights and wall values.
class Observable {
public:
    Observable(const ModelParams& params, const ObservableGrid& grid)
        : params_(params), grid_(grid)
    {
        params_.validate();
        grid_.validate();
        eq_ = equilibrium(params_);
        weights_ = make_weights(grid_.u);
        x1_ = params_.x_inner();
        x2_ = params_.x_outer();
        for (int l = grid_.m; l < grid_.size(); ++l)
            that0_wall_ += weights_.omega[l];
        zero_u_ = std::all_of(grid_.u.begin(), grid_.u.end(), [](double v) { return v == 0.0; });
    }

    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
    [[nodiscard]] const ObservableGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const EquilibriumData& eq() const noexcept { return eq_; }
    [[nodiscard]] const Weights& weights() const noexcept { return weights_; }
    [[nodiscard]] double x_inner() const noexcept { return x1_; }
    [[nodiscard]] double x_outer() const noexcept { return x2_; }
    [[nodiscard]] double Omega() const noexcept { return weights_.Omega; }

    /// T_j(x) = sum_{l <= m} omega_l t_l^j exp(-(t_l / b)(x - x1))
    [[nodiscard]] double T(int j, double x) const
    {
        double s = 0.0;
        for (int l = 0; l < grid_.m; ++l) {
            const double t = grid_.t[l];
            s += weights_.omega[l] * ipow(t, j) * std::exp(-(t / params_.b) * (x - x1_));
        }
        return s;
    }

    /// That_j(x) = sum_{l > m} omega_l t_l^j exp(-(t_l / b)(x2 - x))
    [[nodiscard]] double That(int j, double x) const
    {
        double s = 0.0;
        for (int l = grid_.m; l < grid_.size(); ++l) {
            const double t = grid_.t[l];
            s += weights_.omega[l] * ipow(t, j) * std::exp(-(t / params_.b) * (x2_ - x));
        }
        return s;
    }

    /// That_0 at the outer wall, independent of t.
    [[nodiscard]] double That0_wall() const noexcept { return that0_wall_; }

    /// 1 + T0(x) + That0(x2); equals Omega at x = x1.
    ///
    /// Summed by parts over omega_l = e^{s_l} - e^{s_{l+1}} into nonnegative
    /// terms, because the direct sum cancels down to Omega when the u are
    /// very negative. With E_l = exp(-t_l (x - x1) / b), increasing in l:
    ///   e^{s_1} E_1 + sum_{l=2}^{m} e^{s_l} (E_l - E_{l-1}) + e^{s_{m+1}} (1 - E_m).
    [[nodiscard]] double phi_inner(double x) const
    {
        if (zero_u_)
            return 1.0;
        const auto& s = weights_.suffix;
        const auto& t = grid_.t;
        const int m = grid_.m;
        const double d = (x - x1_) / params_.b;
        double r = std::exp(s[0] - t[0] * d);
        for (int l = 1; l < m; ++l)
            r += std::exp(s[l] - t[l] * d) * -std::expm1(-(t[l - 1] - t[l]) * d);
        return r + std::exp(s[m]) * -std::expm1(-t[m - 1] * d);
    }

    /// 1 - That0(x) + That0(x2); equals 1 at x = x2. Same treatment, with
    /// F_l = exp(-t_l (x2 - x) / b) decreasing in l:
    ///   F_{2m} + e^{s_{m+1}} (1 - F_{m+1}) + sum_{l=m+2}^{2m} e^{s_l} (F_{l-1} - F_l).
    [[nodiscard]] double phi_outer(double x) const
    {
        if (zero_u_)
            return 1.0;
        const auto& s = weights_.suffix;
        const auto& t = grid_.t;
        const int m = grid_.m;
        const int last = grid_.size() - 1;
        const double d = (x2_ - x) / params_.b;
        double r = std::exp(-t[last] * d) + std::exp(s[m]) * -std::expm1(-t[m] * d);
        for (int l = m + 1; l <= last; ++l)
            r += std::exp(s[l] - t[l - 1] * d) * -std::expm1(-(t[l] - t[l - 1]) * d);
        return r;
    }

    /// Q = phi_inner(sigma_star) / phi_outer(sigma_star)
    [[nodiscard]] double Q() const { return phi_inner(eq_.sigma_star) / phi_outer(eq_.sigma_star); }

private:
    static double ipow(double t, int j) noexcept
    {
        double r = 1.0;
        for (int i = 0; i < j; ++i)
            r *= t;
        return r;
    }

    ModelParams params_;
    ObservableGrid grid_;
    EquilibriumData eq_;
    Weights weights_;
    double x1_ = 0.0;
    double x2_ = 0.0;
    double that0_wall_ = 0.0;
    bool zero_u_ = true;
};

struct TValues {
    double T = 0.0;
    double That = 0.0;
};

inline TValues T_funcs(double x, const Observable& obs, int j)
{
    if (j < 0 || j > 2)
        throw DomainError("T_funcs: j must be 0, 1 or 2");
    return {obs.T(j, x), obs.That(j, x)};
}

struct FValues {
    double f = 0.0;
    double fhat = 0.0;
};

/// f and fhat on the open interval (x1, x2). Both have simple poles at the
/// walls; evaluation within 1e-12 of a wall is rejected.
inline FValues f_funcs(double x, const Observable& obs)
{
    const double x1 = obs.x_inner();
    const double x2 = obs.x_outer();
    if (!(x - x1 >= 1e-12) || !(x2 - x >= 1e-12))
        throw DomainError("f_funcs: x must lie in the open interval between the wall values");
    const double b = obs.params().b;
    const double alpha = obs.params().alpha;
    FValues r;
    r.f = (-(x1 / (x - x1) + alpha / b) * obs.T(1, x) - x / (2.0 * b) * obs.T(2, x)) /
          obs.phi_inner(x);
    r.fhat = ((x2 / (x2 - x) - alpha / b) * obs.That(1, x) + x / (2.0 * b) * obs.That(2, x)) /
             obs.phi_outer(x);
    return r;
}

inline double mathsf_Q(const Observable& obs) { return obs.Q(); }

/// n r_l^{2b}: rho1^{2b} (n - t_l) for inner radii, rho2^{2b} (n + t_l) for outer.
inline std::vector<double> scaled_radii(const ObservableGrid& grid, const ModelParams& params, long n)
{
    std::vector<double> z(grid.size());
    const double nn = static_cast<double>(n);
    for (int l = 0; l < grid.size(); ++l) {
        if (grid.is_inner(l)) {
            if (!(nn > grid.t[l]))
                throw DomainError("radii: n must exceed every inner t_l");
            z[l] = params.rho1_pow() * (nn - grid.t[l]);
        } else {
            z[l] = params.rho2_pow() * (nn + grid.t[l]);
        }
    }
    return z;
}

/// r_l = rho1 (1 - t_l/n)^{1/(2b)} or rho2 (1 + t_l/n)^{1/(2b)}.
inline std::vector<double> radii(const ObservableGrid& grid, const ModelParams& params, long n)
{
    grid.validate();
    if (n < 1)
        throw DomainError("radii: n must be positive");
    std::vector<double> r(grid.size());
    const double nn = static_cast<double>(n);
    const double e = 1.0 / (2.0 * params.b);
    for (int l = 0; l < grid.size(); ++l) {
        if (grid.is_inner(l)) {
            if (!(nn > grid.t[l]))
                throw DomainError("radii: n must exceed every inner t_l");
            r[l] = params.rho1 * std::pow(1.0 - grid.t[l] / nn, e);
        } else {
            r[l] = params.rho2 * std::pow(1.0 + grid.t[l] / nn, e);
        }
    }
    return r;
}

}  // namespace hardedge
