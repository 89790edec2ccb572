#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hardedge/error.hpp"
#include "hardedge/model.hpp"
#include "hardedge/numerics/parallel.hpp"
#include "hardedge/numerics/summation.hpp"
#include "hardedge/specialfn/incomplete_gamma.hpp"

namespace hardedge {

/// p(j, l) = P(R_j < r_l) for the independent moduli R_1..R_n, with the
/// complements 1 - p stored separately so both tails keep relative accuracy.
class ModeProbabilities {
public:
    ModeProbabilities() = default;
    ModeProbabilities(long n, int cols)
        : n_(n), cols_(cols), p_(static_cast<std::size_t>(n) * cols), pc_(p_.size()),
          inner_(static_cast<std::size_t>(n))
    {
    }

    [[nodiscard]] long n() const noexcept { return n_; }
    [[nodiscard]] int cols() const noexcept { return cols_; }

    /// j in 1..n, l in 0..cols-1
    [[nodiscard]] double p(long j, int l) const { return p_[index(j, l)]; }
    [[nodiscard]] double complement(long j, int l) const { return pc_[index(j, l)]; }
    /// P(R_j <= rho1), the inner-branch probability of mode j.
    [[nodiscard]] double inner(long j) const { return inner_[static_cast<std::size_t>(j - 1)]; }

    void set(long j, int l, double p, double pc)
    {
        p_[index(j, l)] = p;
        pc_[index(j, l)] = pc;
    }
    void set_inner(long j, double q) { inner_[static_cast<std::size_t>(j - 1)] = q; }

    /// Probabilities that R_j falls in each of the 2m+1 bins cut by r_1 < ... < r_2m.
    [[nodiscard]] std::vector<double> bins(long j) const
    {
        std::vector<double> pi(static_cast<std::size_t>(cols_) + 1);
        pi[0] = p(j, 0);
        for (int l = 1; l < cols_; ++l)
            pi[l] = std::max(0.0, p(j, l) - p(j, l - 1));
        pi[cols_] = complement(j, cols_ - 1);
        return pi;
    }

private:
    [[nodiscard]] std::size_t index(long j, int l) const
    {
        return static_cast<std::size_t>(j - 1) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(l);
    }

    long n_ = 0;
    int cols_ = 0;
    std::vector<double> p_;
    std::vector<double> pc_;
    std::vector<double> inner_;
};

namespace detail {

inline double log_add_exp(double a, double b) noexcept
{
    if (a < b)
        std::swap(a, b);
    if (a == -std::numeric_limits<double>::infinity())
        return a;
    return a + std::log1p(std::exp(b - a));
}

// ln(e^a - e^b) for a >= b.
inline double log_sub_exp(double a, double b) noexcept
{
    if (!(b < a))
        return -std::numeric_limits<double>::infinity();
    return a + std::log1p(-std::exp(b - a));
}

inline double clamp_unit(double x) noexcept { return std::clamp(x, 0.0, 1.0); }

}  // namespace detail

/// Per-mode probabilities. Mode j has shape a_j = (j + alpha)/b; with
/// P1 = P(a_j, n rho1^{2b}) and Q2 = Q(a_j, n rho2^{2b}) the denominator is
/// D_j = P1 + Q2, which is exponentially small for modes whose natural radius
/// sits inside the annulus, so everything is assembled in log space.
inline ModeProbabilities mode_probabilities(const ModelParams& params, const ObservableGrid& grid,
                                            long n, unsigned threads = 1)
{
    params.validate();
    grid.validate();
    if (n < 1)
        throw DomainError("mode_probabilities: n must be positive");
    const std::vector<double> z = scaled_radii(grid, params, n);
    const double nn = static_cast<double>(n);
    const double z1 = params.rho1_pow() * nn;
    const double z2 = params.rho2_pow() * nn;
    const int cols = grid.size();
    const int m = grid.m;
    ModeProbabilities mp(n, cols);

    numerics::parallel_chunks(
        static_cast<std::size_t>(n), 256, threads, [&](std::size_t begin, std::size_t end) {
            using specialfn::inc_gamma;
            for (std::size_t idx = begin; idx < end; ++idx) {
                const long j = static_cast<long>(idx) + 1;
                const double a = (static_cast<double>(j) + params.alpha) / params.b;
                const auto g1 = inc_gamma(a, z1);
                const auto g2 = inc_gamma(a, z2);
                const double log_d = detail::log_add_exp(g1.log_p, g2.log_q);
                if (!std::isfinite(log_d))
                    throw PrecisionError("mode_probabilities: denominator D_j underflowed at j = " +
                                         std::to_string(j));
                mp.set_inner(j, detail::clamp_unit(std::exp(g1.log_p - log_d)));
                for (int l = 0; l < cols; ++l) {
                    double p;
                    double pc;
                    if (l < m) {
                        // P(R < r_l) = P_l / D, complement (P1 - P_l + Q2) / D
                        const auto gl = (z[l] == z1) ? g1 : inc_gamma(a, z[l]);
                        p = std::exp(gl.log_p - log_d);
                        const double log_gap = detail::log_sub_exp(g1.log_p, gl.log_p);
                        pc = std::exp(detail::log_add_exp(log_gap, g2.log_q) - log_d);
                    } else {
                        // complement Q_l / D, probability (P1 + Q2 - Q_l) / D
                        const auto gl = (z[l] == z2) ? g2 : inc_gamma(a, z[l]);
                        pc = std::exp(gl.log_q - log_d);
                        const double log_gap = detail::log_sub_exp(g2.log_q, gl.log_q);
                        p = std::exp(detail::log_add_exp(g1.log_p, log_gap) - log_d);
                    }
                    mp.set(j, l, detail::clamp_unit(p), detail::clamp_unit(pc));
                }
            }
        });
    return mp;
}

/// ln E_n = sum_j ln(1 + sum_l omega_l p(j, l)), summed in order of j with
/// compensation.
inline double log_mgf_exact(const ModeProbabilities& mp, const ObservableGrid& grid)
{
    const Weights w = make_weights(grid.u);
    numerics::CompensatedSum total;
    for (long j = 1; j <= mp.n(); ++j) {
        numerics::CompensatedSum inner;
        for (int l = 0; l < mp.cols(); ++l)
            inner.add(w.omega[l] * mp.p(j, l));
        const double s = inner.value();
        if (!(s > -1.0))
            throw PrecisionError("log_mgf_exact: nonpositive log argument at j = " +
                                 std::to_string(j));
        total.add(std::log1p(s));
    }
    return total.value();
}

/// The same quantity from the bin mixture: mode j contributes
/// ln sum_k pi_k exp(s_k), with s_k the suffix sums of u.
inline double log_mgf_mixture(const ModeProbabilities& mp, const ObservableGrid& grid)
{
    const Weights w = make_weights(grid.u);
    std::vector<double> em1(w.suffix.size());
    for (std::size_t k = 0; k < em1.size(); ++k)
        em1[k] = std::expm1(w.suffix[k]);
    numerics::CompensatedSum total;
    for (long j = 1; j <= mp.n(); ++j) {
        const std::vector<double> pi = mp.bins(j);
        numerics::CompensatedSum inner;
        for (std::size_t k = 0; k < pi.size(); ++k)
            inner.add(pi[k] * em1[k]);
        total.add(std::log1p(inner.value()));
    }
    return total.value();
}

inline double log_mgf_exact(const ModelParams& params, const ObservableGrid& grid, long n,
                            unsigned threads = 1)
{
    return log_mgf_exact(mode_probabilities(params, grid, n, threads), grid);
}

struct ExactMoments {
    std::vector<double> mean;
    std::vector<std::vector<double>> cov;
};

/// N(r_l) = sum_j 1{R_j < r_l} with independent R_j and nested events, so
/// Cov(N(r_l), N(r_k)) = sum_j p(j, l) (1 - p(j, k)) for r_l <= r_k.
inline ExactMoments exact_moments(const ModeProbabilities& mp)
{
    const int c = mp.cols();
    ExactMoments res;
    res.mean.assign(c, 0.0);
    res.cov.assign(c, std::vector<double>(c, 0.0));
    for (int l = 0; l < c; ++l) {
        numerics::CompensatedSum s;
        for (long j = 1; j <= mp.n(); ++j)
            s.add(mp.p(j, l));
        res.mean[l] = s.value();
        for (int k = l; k < c; ++k) {
            numerics::CompensatedSum v;
            for (long j = 1; j <= mp.n(); ++j)
                v.add(mp.p(j, l) * mp.complement(j, k));
            res.cov[l][k] = res.cov[k][l] = v.value();
        }
    }
    return res;
}

/// Third cumulant of N(r_l): sum_j p (1 - p) (1 - 2p).
inline double exact_third_cumulant(const ModeProbabilities& mp, int l)
{
    numerics::CompensatedSum s;
    for (long j = 1; j <= mp.n(); ++j) {
        const double p = mp.p(j, l);
        const double q = mp.complement(j, l);
        s.add(p * q * (q - p));
    }
    return s.value();
}

/// Law of a single count N(r_l).
struct CountingDistribution {
    std::vector<double> pmf;  // pmf[k] = P(N = k), k = 0..n
    double mean = 0.0;
    double variance = 0.0;
};

/// Poisson-binomial law of independent Bernoulli(p_j), by sequential
/// convolution. Entries that underflow to zero are trimmed from the support
/// so long runs of near-deterministic modes cost O(1) each.
inline CountingDistribution poisson_binomial(const std::vector<double>& p,
                                             const std::vector<double>& pc)
{
    const std::size_t n = p.size();
    std::vector<double> pmf(n + 1, 0.0);
    pmf[0] = 1.0;
    std::size_t lo = 0;
    std::size_t hi = 0;  // support [lo, hi]
    for (std::size_t j = 0; j < n; ++j) {
        const double a = p[j];
        const double b = pc[j];
        if (a == 0.0)
            continue;
        if (b == 0.0) {
            for (std::size_t k = hi + 1; k-- > lo;)
                pmf[k + 1] = pmf[k];
            pmf[lo] = 0.0;
            ++lo;
            ++hi;
            continue;
        }
        pmf[hi + 1] = pmf[hi] * a;
        for (std::size_t k = hi; k > lo; --k)
            pmf[k] = pmf[k] * b + pmf[k - 1] * a;
        pmf[lo] *= b;
        ++hi;
        while (lo < hi && pmf[lo] == 0.0)
            ++lo;
        while (hi > lo && pmf[hi] == 0.0)
            --hi;
    }
    CountingDistribution d;
    numerics::CompensatedSum total;
    numerics::CompensatedSum first;
    for (std::size_t k = lo; k <= hi; ++k) {
        total.add(pmf[k]);
        first.add(static_cast<double>(k) * pmf[k]);
    }
    d.mean = first.value() / total.value();
    numerics::CompensatedSum second;
    for (std::size_t k = lo; k <= hi; ++k) {
        const double dk = static_cast<double>(k) - d.mean;
        second.add(dk * dk * pmf[k]);
    }
    d.variance = second.value() / total.value();
    d.pmf = std::move(pmf);
    return d;
}

inline CountingDistribution counting_pmf(const ModeProbabilities& mp, int l)
{
    if (l < 0 || l >= mp.cols())
        throw DomainError("counting_pmf: column out of range");
    std::vector<double> p(static_cast<std::size_t>(mp.n()));
    std::vector<double> pc(p.size());
    for (long j = 1; j <= mp.n(); ++j) {
        p[j - 1] = mp.p(j, l);
        pc[j - 1] = mp.complement(j, l);
    }
    return poisson_binomial(p, pc);
}

/// Lambda_n = sigma_star n - 1/2 - alpha + ln(sigma2/sigma1) / (2 ln(rho2/rho1)),
/// with the integer and fractional parts split off before rounding error in
/// sigma_star n can matter.
struct Centering {
    double value = 0.0;
    long floor = 0;
    double frac = 0.0;
};

inline Centering centering(const ModelParams& params, const EquilibriumData& eq, long n)
{
    const double L = params.log_ratio();
    const double prod = eq.sigma_star * static_cast<double>(n);
    const double whole = std::floor(prod);
    const double shift = (prod - whole) - 0.5 - params.alpha + std::log(eq.sigma2 / eq.sigma1) / (2.0 * L);
    const double shift_floor = std::floor(shift);
    Centering c;
    c.value = prod - 0.5 - params.alpha + std::log(eq.sigma2 / eq.sigma1) / (2.0 * L);
    c.floor = static_cast<long>(whole + shift_floor);
    c.frac = shift - shift_floor;
    return c;
}

/// Discrete Gaussian on the integers with weights (rho1/rho2)^{(x - frac)^2},
/// truncated to |x| <= K with K large enough that the neglected mass is below 1e-12.
struct DiscreteGaussian {
    long x_min = 0;
    std::vector<double> pmf;
    Centering lambda;

    [[nodiscard]] long x_max() const noexcept { return x_min + static_cast<long>(pmf.size()) - 1; }
    [[nodiscard]] double at(long x) const
    {
        return (x < x_min || x > x_max()) ? 0.0 : pmf[static_cast<std::size_t>(x - x_min)];
    }
    /// E[Q^{X - frac}]
    [[nodiscard]] double mgf(double Q) const
    {
        numerics::CompensatedSum s;
        for (long x = x_min; x <= x_max(); ++x)
            s.add(at(x) * std::pow(Q, static_cast<double>(x) - lambda.frac));
        return s.value();
    }
};

inline long discrete_gaussian_window(const ModelParams& params)
{
    return static_cast<long>(std::ceil(std::sqrt(12.0 * std::numbers::ln10 / params.log_ratio()))) + 2;
}

inline DiscreteGaussian discrete_gaussian_pmf(const ModelParams& params, const EquilibriumData& eq,
                                              long n)
{
    const double L = params.log_ratio();
    const long K = discrete_gaussian_window(params);
    DiscreteGaussian g;
    g.lambda = centering(params, eq, n);
    g.x_min = -K;
    g.pmf.resize(static_cast<std::size_t>(2 * K + 1));
    numerics::CompensatedSum total;
    for (long x = -K; x <= K; ++x) {
        const double d = static_cast<double>(x) - g.lambda.frac;
        const double w = std::exp(-L * d * d);
        g.pmf[static_cast<std::size_t>(x + K)] = w;
        total.add(w);
    }
    const double z = total.value();
    for (double& v : g.pmf)
        v /= z;
    return g;
}

/// Total variation between the law of N - floor(Lambda_n) and the discrete Gaussian.
inline double total_variation(const CountingDistribution& exact, const DiscreteGaussian& g)
{
    const long shift = g.lambda.floor;
    const long n = static_cast<long>(exact.pmf.size()) - 1;
    numerics::CompensatedSum s;
    const long lo = std::min(g.x_min, -shift);
    const long hi = std::max(g.x_max(), n - shift);
    for (long x = lo; x <= hi; ++x) {
        const long k = x + shift;
        const double pe = (k >= 0 && k <= n) ? exact.pmf[static_cast<std::size_t>(k)] : 0.0;
        s.add(std::fabs(pe - g.at(x)));
    }
    return 0.5 * s.value();
}

}  // namespace hardedge
