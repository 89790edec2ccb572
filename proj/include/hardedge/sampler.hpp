#pragma once

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "hardedge/error.hpp"
#include "hardedge/exact.hpp"
#include "hardedge/model.hpp"
#include "hardedge/numerics/parallel.hpp"
#include "hardedge/specialfn/incomplete_gamma.hpp"

namespace hardedge {

/// Counter-based generator: output k of stream (seed, a, b) is a fixed hash
/// of (seed, a, b, k), so every (sample, mode) pair owns an independent,
/// order-free substream.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
        : key_(mix(mix(seed ^ 0x243f6a8885a308d3ULL) ^ mix(a + 0x13198a2e03707344ULL) ^
                   mix(b + 0xa4093822299f31d0ULL)))
    {
    }

    std::uint64_t next() noexcept { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept
    {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

namespace detail {

// Root of g(v) = target on [lo, hi] for increasing g with g' = dg(v), by
// Newton steps kept inside a shrinking bracket.
template <class G, class DG>
double bracketed_newton(G&& g, DG&& dg, double target, double lo, double hi, double v)
{
    for (int it = 0; it < 400; ++it) {
        const double r = g(v) - target;
        if (r == 0.0)
            return v;
        if (r < 0.0)
            lo = v;
        else
            hi = v;
        const double slope = dg(v);
        double next = v - r / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next))
            next = 0.5 * (lo + hi);
        if (std::fabs(next - v) <= 1e-14 * std::max(1.0, std::fabs(v)) || hi - lo <= 1e-14 * hi)
            return next;
        v = next;
    }
    throw ConvergenceError("modulus inversion did not converge");
}

// d/dv ln P(a, v) and -d/dv ln Q(a, v) are the Gamma(a) density over the tail.
inline double log_gamma_density(double a, double v) noexcept
{
    return (a - 1.0) * std::log(v) - v - specialfn::detail::log_gamma(a);
}

}  // namespace detail

/// Draws R_j for one mode j from the density proportional to
/// u^{2j+2alpha-1} exp(-n u^{2b}) on [0, rho1] and [rho2, inf), given the
/// inner-branch probability q_j.
inline double sample_modulus(const ModelParams& params, long n, long j, double q_inner,
                             StreamRng& rng)
{
    using specialfn::inc_gamma;
    const double nn = static_cast<double>(n);
    const double a = (static_cast<double>(j) + params.alpha) / params.b;
    const double z1 = params.rho1_pow() * nn;
    const double z2 = params.rho2_pow() * nn;
    const double branch = rng.uniform();
    const double log_u = std::log(rng.uniform());
    double v;
    if (branch < q_inner) {
        // P(a, v) = U P(a, z1) on (0, z1]
        const double target = log_u + inc_gamma(a, z1).log_p;
        v = detail::bracketed_newton(
            [a](double x) { return inc_gamma(a, x).log_p; },
            [a](double x) { return std::exp(detail::log_gamma_density(a, x) - inc_gamma(a, x).log_p); },
            target, 0.0, z1, std::min(a, z1));
    } else {
        // Q(a, v) = U Q(a, z2) on [z2, inf): -ln Q increasing
        const double target = -(log_u + inc_gamma(a, z2).log_q);
        double hi = std::max(2.0 * z2, a + 10.0 * std::sqrt(a) + 50.0);
        while (-inc_gamma(a, hi).log_q < target)
            hi *= 2.0;
        v = detail::bracketed_newton(
            [a](double x) { return -inc_gamma(a, x).log_q; },
            [a](double x) { return std::exp(detail::log_gamma_density(a, x) - inc_gamma(a, x).log_q); },
            target, z2, hi, std::max(a, z2));
        v = std::max(v, z2);
    }
    return std::pow(v / nn, 1.0 / (2.0 * params.b));
}

/// One realization of all n moduli.
inline std::vector<double> sample_moduli(const ModelParams& params, long n, std::uint64_t seed,
                                         unsigned threads = 1)
{
    params.validate();
    const ObservableGrid wall{1, {0.0, 0.0}, {0.0, 0.0}};
    const ModeProbabilities mp = mode_probabilities(params, wall, n, threads);
    std::vector<double> r(static_cast<std::size_t>(n));
    numerics::parallel_chunks(r.size(), 256, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const long j = static_cast<long>(i) + 1;
            StreamRng rng(seed, 0, static_cast<std::uint64_t>(j));
            r[i] = sample_modulus(params, n, j, mp.inner(j), rng);
        }
    });
    return r;
}

/// Points z_j = R_j e^{i phi_j} with iid uniform angles.
inline std::vector<std::pair<double, double>> export_point_cloud(const ModelParams& params, long n,
                                                                 std::uint64_t seed,
                                                                 unsigned threads = 1)
{
    const std::vector<double> r = sample_moduli(params, n, seed, threads);
    std::vector<std::pair<double, double>> pts(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        StreamRng rng(seed, 1, static_cast<std::uint64_t>(i + 1));
        const double phi = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
        pts[i] = {r[i] * std::cos(phi), r[i] * std::sin(phi)};
    }
    return pts;
}

/// counts(s, l) = N(r_l) in sample s.
struct SampleBatch {
    long n = 0;
    long num_samples = 0;
    std::uint64_t seed = 0;
    int cols = 0;
    std::vector<std::int32_t> counts;

    [[nodiscard]] std::int32_t count(long s, int l) const
    {
        return counts[static_cast<std::size_t>(s) * static_cast<std::size_t>(cols) +
                      static_cast<std::size_t>(l)];
    }
};

/// Each mode lands in one of the 2m+1 bins cut by the radii; only the bin
/// matters for the counts, so the modulus itself is never inverted. Modes
/// whose bin is certain to within 1e-18 are added deterministically.
inline SampleBatch sample_counts(const ModelParams& params, const ObservableGrid& grid, long n,
                                 long num_samples, std::uint64_t seed, unsigned threads = 1)
{
    if (num_samples < 1)
        throw DomainError("sample_counts: num_samples must be positive");
    const ModeProbabilities mp = mode_probabilities(params, grid, n, threads);
    const int cols = grid.size();
    const std::size_t nb = static_cast<std::size_t>(cols) + 1;

    std::vector<long> fixed_hist(nb, 0);
    std::vector<long> random_modes;
    std::vector<double> cdf;  // cumulative bin probabilities of the random modes
    for (long j = 1; j <= n; ++j) {
        const std::vector<double> pi = mp.bins(j);
        const auto top = std::max_element(pi.begin(), pi.end());
        double rest = 0.0;
        for (auto it = pi.begin(); it != pi.end(); ++it)
            if (it != top)
                rest += *it;
        if (rest < 1e-18) {
            ++fixed_hist[static_cast<std::size_t>(top - pi.begin())];
            continue;
        }
        random_modes.push_back(j);
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < nb; ++k) {
            acc += pi[k];
            cdf.push_back(acc);
        }
    }

    SampleBatch batch{n, num_samples, seed, cols,
                      std::vector<std::int32_t>(static_cast<std::size_t>(num_samples) * cols)};
    numerics::parallel_chunks(
        static_cast<std::size_t>(num_samples), 64, threads, [&](std::size_t begin, std::size_t end) {
            std::vector<long> hist(nb);
            for (std::size_t s = begin; s < end; ++s) {
                std::copy(fixed_hist.begin(), fixed_hist.end(), hist.begin());
                for (std::size_t i = 0; i < random_modes.size(); ++i) {
                    StreamRng rng(seed, s + 2, static_cast<std::uint64_t>(random_modes[i]));
                    const double u = rng.uniform();
                    const double* c = &cdf[i * (nb - 1)];
                    std::size_t k = 0;
                    while (k + 1 < nb && u >= c[k])
                        ++k;
                    ++hist[k];
                }
                long running = 0;
                for (int l = 0; l < cols; ++l) {
                    running += hist[static_cast<std::size_t>(l)];
                    batch.counts[s * static_cast<std::size_t>(cols) + l] =
                        static_cast<std::int32_t>(running);
                }
            }
        });
    return batch;
}

/// Anderson-Darling statistic against a normal law with estimated mean and
/// variance, with Stephens' small-sample factor, and its approximate p-value.
struct NormalityTest {
    double statistic = 0.0;
    double p_value = 0.0;
};

inline NormalityTest anderson_darling_normal(std::vector<double> x)
{
    const std::size_t n = x.size();
    if (n < 8)
        throw DomainError("anderson_darling_normal: need at least 8 observations");
    std::sort(x.begin(), x.end());
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x)
        var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(n - 1));
    auto log_cdf = [&](double v) { return std::log(0.5 * std::erfc(-(v - mean) / (sd * std::numbers::sqrt2))); };
    auto log_sf = [&](double v) { return std::log(0.5 * std::erfc((v - mean) / (sd * std::numbers::sqrt2))); };
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * static_cast<double>(i) + 1.0;
        s += w * (log_cdf(x[i]) + log_sf(x[n - 1 - i]));
    }
    const double nn = static_cast<double>(n);
    const double a2 = -nn - s / nn;
    const double a = a2 * (1.0 + 0.75 / nn + 2.25 / (nn * nn));
    double p;
    if (a >= 0.6)
        p = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
    else if (a >= 0.34)
        p = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
    else if (a >= 0.2)
        p = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
    else
        p = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
    return {a, std::clamp(p, 0.0, 1.0)};
}

/// Pearson chi-square p-value of observed counts against equal expected counts.
inline double chi_square_uniform_p(const std::vector<long>& observed)
{
    double total = 0.0;
    for (long o : observed)
        total += static_cast<double>(o);
    const double expected = total / static_cast<double>(observed.size());
    double stat = 0.0;
    for (long o : observed)
        stat += (static_cast<double>(o) - expected) * (static_cast<double>(o) - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace hardedge
