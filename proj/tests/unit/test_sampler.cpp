#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hardedge/asymptotic.hpp"
#include "hardedge/exact.hpp"
#include "hardedge/sampler.hpp"

using namespace hardedge;

namespace {

const ModelParams ref{1.0, 0.0, 0.6, 0.8};

struct Stats {
    double mean = 0.0;
    double var = 0.0;
    double m4 = 0.0;  // fourth central moment
};

Stats stats_of(const std::vector<double>& x)
{
    Stats s;
    const double n = static_cast<double>(x.size());
    for (double v : x)
        s.mean += v;
    s.mean /= n;
    for (double v : x) {
        const double d = v - s.mean;
        s.var += d * d;
        s.m4 += d * d * d * d;
    }
    s.var /= n - 1.0;
    s.m4 /= n;
    return s;
}

}  // namespace

TEST(StreamRng, DeterministicAndDistinctStreams)
{
    StreamRng a(1, 2, 3), b(1, 2, 3), c(1, 2, 4), d(2, 2, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        EXPECT_NE(x, c.next());
        EXPECT_NE(x, d.next());
    }
    StreamRng u(9, 0, 0);
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double v = u.uniform();
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
        sum += v;
    }
    EXPECT_NEAR(sum / 100000.0, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000.0));
}

TEST(SampleModuli, RespectTheWall)
{
    for (double b : {0.5, 1.0, 2.0}) {
        const ModelParams p = figure_params(b, 0.5);
        const auto r = sample_moduli(p, 2048, 17, 4);
        ASSERT_EQ(r.size(), 2048u);
        for (double v : r) {
            ASSERT_TRUE(v <= p.rho1 || v >= p.rho2) << v;
            ASSERT_GT(v, 0.0);
        }
    }
}

TEST(SampleModuli, InnerBranchFrequencyMatchesModeProbability)
{
    const long n = 200;
    const ModeProbabilities mp = mode_probabilities(ref, {1, {0, 0}, {0, 0}}, n);
    const EquilibriumData eq = equilibrium(ref);
    const long centre = std::lround(eq.sigma_star * n);
    for (long j : {centre - 2, centre, centre + 1, centre + 3}) {
        const double q = mp.inner(j);
        const int draws = 100000;
        long inner = 0;
        for (int s = 0; s < draws; ++s) {
            StreamRng rng(77, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(j));
            if (sample_modulus(ref, n, j, q, rng) <= ref.rho1)
                ++inner;
        }
        const double se = std::sqrt(q * (1.0 - q) / draws);
        EXPECT_NEAR(static_cast<double>(inner) / draws, q, 4.0 * se) << j;
    }
}

TEST(SampleModuli, ConditionalBranchLaw)
{
    // Given the inner branch, P(R <= s) = P(a, n s^{2b}) / P(a, n rho1^{2b}).
    const long n = 50, j = 20;
    const double a = static_cast<double>(j);
    const double s = 0.55;
    const double target = specialfn::reg_inc_gamma(a, n * s * s) / specialfn::reg_inc_gamma(a, n * 0.36);
    const int draws = 50000;
    long below = 0;
    for (int k = 0; k < draws; ++k) {
        StreamRng rng(5, static_cast<std::uint64_t>(k), 0);
        if (sample_modulus(ref, n, j, 1.0, rng) <= s)
            ++below;
    }
    EXPECT_NEAR(static_cast<double>(below) / draws, target, 4.0 * std::sqrt(target * (1 - target) / draws));
}

TEST(SampleModuli, RadialHistogramFollowsTheDensity)
{
    const long n = 4096;
    const auto r = sample_moduli(ref, n, 2024, 4);
    // bulk of the outer component, away from the wall layer and the soft edge
    const double edges[] = {0.83, 0.87, 0.91, 0.95};
    for (int k = 0; k + 1 < 4; ++k) {
        const double lo = edges[k], hi = edges[k + 1];
        const long count = std::count_if(r.begin(), r.end(), [&](double v) { return v >= lo && v < hi; });
        const double expected = n * (hi * hi - lo * lo);
        EXPECT_NEAR(static_cast<double>(count), expected, 0.03 * expected) << lo;
    }
    const long inside = std::count_if(r.begin(), r.end(), [&](double v) { return v <= ref.rho1; });
    EXPECT_NEAR(static_cast<double>(inside), equilibrium(ref).sigma_star * n, 5.0);
    const long far = std::count_if(r.begin(), r.end(), [](double v) { return v > 1.1; });
    EXPECT_EQ(far, 0);
}

TEST(PointCloud, WallAnnulusIsEmptyAndAnglesUniform)
{
    const auto pts = export_point_cloud(ref, 4096, 99, 4);
    std::vector<long> sectors(32, 0);
    for (auto [x, y] : pts) {
        const double r = std::hypot(x, y);
        ASSERT_FALSE(r > ref.rho1 * (1 + 1e-12) && r < ref.rho2 * (1 - 1e-12)) << r;
        const double phi = std::atan2(y, x);
        const int s = std::min(31, static_cast<int>((phi + std::numbers::pi) / (2.0 * std::numbers::pi) * 32.0));
        ++sectors[s];
    }
    EXPECT_GT(chi_square_uniform_p(sectors), 0.01);
}

TEST(SampleCounts, ReproducibleNestedAndThreadIndependent)
{
    const ObservableGrid g{2, {2, 0.5, 0.5, 2}, {0, 0, 0, 0}};
    const SampleBatch a = sample_counts(ref, g, 1000, 300, 123, 1);
    const SampleBatch b = sample_counts(ref, g, 1000, 300, 123, 4);
    const SampleBatch c = sample_counts(ref, g, 1000, 300, 124, 1);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, c.counts);
    for (long s = 0; s < a.num_samples; ++s) {
        ASSERT_GE(a.count(s, 0), 0);
        ASSERT_LE(a.count(s, 3), 1000);
        for (int l = 1; l < 4; ++l)
            ASSERT_LE(a.count(s, l - 1), a.count(s, l));
    }
    EXPECT_THROW(sample_counts(ref, g, 1000, 0, 1), DomainError);
    EXPECT_EQ(sample_moduli(ref, 500, 8), sample_moduli(ref, 500, 8, 3));
}

TEST(SampleCounts, MomentsWithinStandardErrors)
{
    const long n = 1024, S = 20000;
    const ObservableGrid g{1, {1.0, 0.5}, {0, 0}};
    const SampleBatch batch = sample_counts(ref, g, n, S, 31, 4);
    const ExactMoments mom = exact_moments(mode_probabilities(ref, g, n));
    for (int l = 0; l < 2; ++l) {
        std::vector<double> x(S);
        for (long s = 0; s < S; ++s)
            x[s] = batch.count(s, l);
        const Stats st = stats_of(x);
        EXPECT_NEAR(st.mean, mom.mean[l], 4.0 * std::sqrt(mom.cov[l][l] / S)) << l;
        const double se_var = std::sqrt((st.m4 - st.var * st.var) / S);
        EXPECT_NEAR(st.var, mom.cov[l][l], 5.0 * se_var) << l;
    }
}

TEST(SampleCounts, StandardizedCountsLookGaussianAndBlocksDecouple)
{
    const long n = 8192, S = 10000;
    const ObservableGrid g{1, {5.0, 5.0}, {0, 0}};
    const SampleBatch batch = sample_counts(ref, g, n, S, 555, 4);
    std::vector<std::vector<double>> z(2, std::vector<double>(S));
    for (int l = 0; l < 2; ++l) {
        const ExpansionTerms mean = expectation_asymptotics(ref, g, l, n);
        const double scale = std::sqrt(covariance_asymptotics(ref, g, l, l, n).b * n);
        for (long s = 0; s < S; ++s) {
            // uniform jitter removes the ties of integer data
            StreamRng jitter(555, 1u << 20, static_cast<std::uint64_t>(2 * s + l));
            const double x = batch.count(s, l) + jitter.uniform() - 0.5;
            z[l][s] = (x - (mean.b * n + mean.c * std::log(static_cast<double>(n)))) / scale;
        }
        EXPECT_GT(anderson_darling_normal(z[l]).p_value, 1e-3) << l;
    }
    const Stats a = stats_of(z[0]), b = stats_of(z[1]);
    double cov = 0.0;
    for (long s = 0; s < S; ++s)
        cov += (z[0][s] - a.mean) * (z[1][s] - b.mean);
    cov /= S - 1.0;
    EXPECT_LT(std::fabs(cov / std::sqrt(a.var * b.var)), 0.05);
}

TEST(Statistics, AndersonDarlingSeparatesNormalFromSkewed)
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> norm(3.0, 2.0);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(2000), y(2000);
    for (auto& v : x)
        v = norm(rng);
    for (auto& v : y)
        v = expo(rng);
    EXPECT_GT(anderson_darling_normal(x).p_value, 0.01);
    EXPECT_LT(anderson_darling_normal(y).p_value, 1e-6);
    EXPECT_THROW(anderson_darling_normal({1, 2, 3}), DomainError);
}

TEST(Statistics, ChiSquareUniform)
{
    EXPECT_NEAR(chi_square_uniform_p({100, 100, 100, 100}), 1.0, 1e-12);
    EXPECT_LT(chi_square_uniform_p({150, 100, 100, 50}), 1e-6);
}
