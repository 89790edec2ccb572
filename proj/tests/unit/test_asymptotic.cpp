#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hardedge/asymptotic.hpp"
#include "hardedge/error.hpp"
#include "hardedge/exact.hpp"

using namespace hardedge;

namespace {

const ModelParams ref{1.0, 0.0, 0.6, 0.8};
const ModelParams wide{1.0, 0.0, 0.15, 0.9};

ObservableGrid random_grid(std::mt19937_64& rng, int m, bool zero_inner, bool zero_outer)
{
    std::uniform_real_distribution<double> t(0.05, 3.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> inner(m), outer(m);
    for (auto& v : inner)
        v = t(rng);
    for (auto& v : outer)
        v = t(rng);
    std::sort(inner.begin(), inner.end(), std::greater<>());
    std::sort(outer.begin(), outer.end());
    if (zero_inner)
        inner.back() = 0.0;
    if (zero_outer)
        outer.front() = 0.0;
    ObservableGrid g{m, inner, {}};
    g.t.insert(g.t.end(), outer.begin(), outer.end());
    for (int i = 0; i < 2 * m; ++i)
        g.u.push_back(u(rng));
    return g;
}

// b = 1, rho1 = 0.15 and rho2 chosen so that sigma_star = 1/4.
ModelParams quarter_sigma_params()
{
    double lo = 0.9, hi = 0.999;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (equilibrium({1.0, 0.0, 0.15, mid}).sigma_star < 0.25 ? lo : hi) = mid;
    }
    return {1.0, 0.0, 0.15, 0.5 * (lo + hi)};
}

}  // namespace

TEST(Constants, VanishAtZeroExponents)
{
    for (const ModelParams& p : {ref, wide, figure_params(0.5, 0.4), figure_params(2.0)}) {
        const AsymptoticExpansion e = constants(p, {2, {2, 0.5, 0.2, 1}, {0, 0, 0, 0}});
        EXPECT_EQ(e.C1, 0.0);
        EXPECT_EQ(e.C2, 0.0);
        EXPECT_EQ(e.C3, 0.0);
        EXPECT_EQ(e.C4, 0.0);
        EXPECT_EQ(e.lnQ, 0.0);
        for (long n : {10L, 333L, 4096L}) {
            EXPECT_EQ(e.F(n), 0.0);
            EXPECT_EQ(log_mgf_asymptotic(p, {2, {2, 0.5, 0.2, 1}, {0, 0, 0, 0}}, n), 0.0);
        }
    }
}

TEST(Constants, WallOnlyInnerExponent)
{
    for (double alpha : {0.0, 0.3, 2.0}) {
        const ModelParams p = figure_params(1.0, alpha);
        const EquilibriumData eq = equilibrium(p);
        const double L = p.log_ratio();
        const double lsr = std::log(eq.sigma2 / eq.sigma1);
        for (double u1 : {-2.0, 0.7}) {
            const AsymptoticExpansion e = constants(p, {1, {0, 0}, {u1, 0}});
            EXPECT_NEAR(e.lnQ, u1, 1e-15);
            EXPECT_NEAR(e.C1, u1 * eq.sigma_star, 1e-14);
            EXPECT_NEAR(e.C2, 0.0, 1e-15);
            EXPECT_NEAR(e.C3, -u1 / 2 - u1 * (alpha - (2.0 * lsr + u1) / (4.0 * L)), 1e-13);
            EXPECT_NEAR(e.C4, 0.0, 1e-15);
        }
    }
}

TEST(Constants, LogMgfIsTheFiveTermForm)
{
    const ObservableGrid g{1, {1, 1}, {0.5, -0.3}};
    const AsymptoticExpansion e = constants(ref, g);
    for (long n : {200L, 1000L, 12345L}) {
        const double nn = static_cast<double>(n);
        EXPECT_NEAR(log_mgf_asymptotic(ref, g, n),
                    e.C1 * nn + e.C2 * std::log(nn) + e.C3 + e.F(n) + e.C4 / std::sqrt(nn), 1e-12 * nn);
    }
}

TEST(Constants, ReferenceValuesAreStable)
{
    const AsymptoticExpansion e = constants(ref, {1, {1, 1}, {0.5, -0.3}});
    EXPECT_NEAR(e.C1, 0.0913200111568467, 1e-12);
    EXPECT_NEAR(e.C2, -0.153762650633576, 1e-12);
    EXPECT_NEAR(e.C3, 0.214605690231185, 1e-11);
    EXPECT_NEAR(e.C4, -0.13937357947015, 1e-11);
    EXPECT_NEAR(e.lnQ, 0.189607878052192, 1e-12);
}

TEST(Fn, PeriodicWhenSigmaStarIsRational)
{
    const ModelParams p = quarter_sigma_params();
    ASSERT_NEAR(equilibrium(p).sigma_star, 0.25, 1e-14);
    const AsymptoticExpansion e = constants(p, {1, {0.5, 1}, {0.8, -0.4}});
    ASSERT_GT(std::fabs(e.F(101) - e.F(102)), 1e-5);
    for (long n : {1L, 10L, 101L, 1000L})
        EXPECT_NEAR(e.F(n + 4), e.F(n), 1e-10) << n;
}

TEST(Fn, MatchesDiscreteGaussianExpectation)
{
    std::mt19937_64 rng(8);
    for (const ModelParams& p : {ref, wide, figure_params(0.5, 0.2)}) {
        const EquilibriumData eq = equilibrium(p);
        for (int trial = 0; trial < 5; ++trial) {
            const AsymptoticExpansion e = constants(p, random_grid(rng, 1 + trial % 2, false, false));
            const double Q = std::exp(e.lnQ);
            for (long n : {100L, 1001L, 8192L}) {
                const DiscreteGaussian g = discrete_gaussian_pmf(p, eq, n);
                const double rewrite = -e.lnQ * e.lnQ / (4.0 * p.log_ratio()) + std::log(g.mgf(Q));
                EXPECT_NEAR(e.F(n), rewrite, 1e-10);
            }
        }
    }
}

TEST(Expectation, InnerWallCountMatchesCentering)
{
    for (const ModelParams& p : {ref, wide}) {
        const EquilibriumData eq = equilibrium(p);
        const ObservableGrid g{1, {0, 0}, {0, 0}};
        const ThetaSlice th = theta_slice(p, eq);
        for (long n : {50L, 777L, 4096L}) {
            const ExpansionTerms t = expectation_asymptotics(p, g, 0, n);
            EXPECT_DOUBLE_EQ(t.b, eq.sigma_star);
            EXPECT_EQ(t.c, 0.0);
            EXPECT_EQ(t.e, 0.0);
            const double z = th.argument(eq.sigma_star, n);
            const double expected = centering(p, eq, n).value + specialfn::log_theta_d1(z, th.params) / (2.0 * p.log_ratio());
            EXPECT_NEAR(t.value(), expected, 1e-9 * static_cast<double>(n));
        }
    }
}

TEST(Expectation, OuterWallLeadingTerm)
{
    const EquilibriumData eq = equilibrium(ref);
    EXPECT_NEAR(expectation_asymptotics(ref, {1, {0, 0}, {0, 0}}, 1, 100).b, eq.sigma_star, 1e-15);
    EXPECT_THROW(expectation_asymptotics(ref, {1, {0, 0}, {0, 0}}, 2, 100), DomainError);
}

TEST(Expectation, ConvergesToExactMean)
{
    const ObservableGrid g{1, {1.5, 2.0}, {0, 0}};
    for (int l = 0; l < 2; ++l) {
        double prev = 1.0, first = 0.0;
        for (long n : {1024L, 4096L, 16384L}) {
            const double exact = exact_moments(mode_probabilities(ref, g, n)).mean[l];
            const double err = std::fabs(expectation_asymptotics(ref, g, l, n).value() - exact);
            EXPECT_LT(err, prev) << l << " " << n;
            if (n == 1024)
                first = err;
            prev = err;
        }
        // 16^{3/5} > 5
        EXPECT_LT(prev, first / 5.0);
    }
}

TEST(Covariance, RegimeZeros)
{
    const ObservableGrid g{2, {2, 0, 0, 1.5}, {0, 0, 0, 0}};
    EXPECT_EQ(covariance_asymptotics(ref, g, 0, 1, 100).b, 0.0);
    EXPECT_EQ(covariance_asymptotics(ref, g, 2, 3, 100).b, 0.0);
    const ExpansionTerms cross = covariance_asymptotics(ref, g, 1, 2, 100);
    EXPECT_EQ(cross.b, 0.0);
    EXPECT_EQ(cross.c, 0.0);
    EXPECT_EQ(cross.e, 0.0);
    EXPECT_NEAR(cross.d, 1.0 / (2.0 * ref.log_ratio()), 1e-15);
    EXPECT_EQ(covariance_asymptotics(ref, g, 0, 3, 9).value(), covariance_asymptotics(ref, g, 3, 0, 9).value());
}

TEST(Covariance, InnerWallVarianceFormula)
{
    for (const ModelParams& p : {ref, wide}) {
        const EquilibriumData eq = equilibrium(p);
        const ThetaSlice th = theta_slice(p, eq);
        const double L = p.log_ratio();
        for (long n : {64L, 1000L, 8191L}) {
            const double z = th.argument(eq.sigma_star, n);
            const double wp = specialfn::weierstrass_p_half_period(z - 0.5, th.params);
            const double expected = 1.0 / (2.0 * L) - (wp - th.c_const) / (4.0 * L * L);
            EXPECT_NEAR(covariance_asymptotics(p, {1, {0, 0}, {0, 0}}, 0, 0, n).value(), expected, 1e-12);
            // the same oscillation through the log-theta series
            EXPECT_NEAR(wp - th.c_const, -specialfn::log_theta_d2(z, th.params), 1e-9 * std::max(1.0, std::fabs(wp)));
        }
    }
}

TEST(Covariance, ConvergesToExactCovariance)
{
    const ObservableGrid g{1, {1.0, 0.5}, {0, 0}};
    for (auto [l, k] : {std::pair{0, 0}, std::pair{1, 1}, std::pair{0, 1}}) {
        double prev = 1.0;
        for (long n : {1024L, 4096L, 16384L}) {
            const double exact = exact_moments(mode_probabilities(ref, g, n)).cov[l][k];
            const double err = std::fabs(covariance_asymptotics(ref, g, l, k, n).value() - exact);
            EXPECT_LT(err, prev) << l << k << " " << n;
            prev = err;
        }
        EXPECT_LT(prev, 0.01);
    }
}

TEST(Derivatives, MatchClosedFormCoefficients)
{
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 4; ++trial) {
        const ModelParams p = figure_params(trial % 2 ? 2.0 : 0.5, 0.25 * trial);
        const ObservableGrid g = random_grid(rng, 2, trial % 2 == 0, trial % 3 == 0);
        const long n = 1000 + 37 * trial;
        const int c = g.size();
        for (int l = 0; l < c; ++l) {
            std::vector<int> o(c, 0);
            o[l] = 1;
            const ExpansionDerivatives d = expansion_derivatives(p, g, o, n);
            const ExpansionTerms t = expectation_asymptotics(p, g, l, n);
            EXPECT_NEAR(d.C1, t.b, 1e-6);
            EXPECT_NEAR(d.C2, t.c, 1e-6);
            EXPECT_NEAR(d.C3, t.d, 1e-6);
            EXPECT_NEAR(d.C4, t.e, 1e-6);
            EXPECT_NEAR(d.F, t.f, 1e-6);
            for (int k = l; k < c; ++k) {
                std::vector<int> o2(c, 0);
                ++o2[l];
                ++o2[k];
                const ExpansionDerivatives d2 = expansion_derivatives(p, g, o2, n);
                const ExpansionTerms t2 = covariance_asymptotics(p, g, l, k, n);
                EXPECT_NEAR(d2.C1, t2.b, 1e-6) << l << k;
                EXPECT_NEAR(d2.C2, t2.c, 1e-6) << l << k;
                EXPECT_NEAR(d2.C3, t2.d, 1e-6) << l << k;
                EXPECT_NEAR(d2.C4, t2.e, 1e-6) << l << k;
                EXPECT_NEAR(d2.F, t2.f, 1e-6) << l << k;
            }
        }
    }
}

TEST(Cumulants, LowOrdersDispatchToCorollaries)
{
    const ObservableGrid g{1, {1.0, 0.5}, {0, 0}};
    const std::vector<int> e0{1, 0}, e01{1, 1}, big{3, 2};
    EXPECT_EQ(cumulant_asymptotics(ref, g, e0, 500), expectation_asymptotics(ref, g, 0, 500).value());
    EXPECT_EQ(cumulant_asymptotics(ref, g, e01, 500), covariance_asymptotics(ref, g, 0, 1, 500).value());
    EXPECT_THROW(cumulant_asymptotics(ref, g, big, 500), DomainError);
    EXPECT_THROW(cumulant_asymptotics(ref, g, std::vector<int>{0, 0}, 500), DomainError);
    EXPECT_THROW(cumulant_asymptotics(ref, g, std::vector<int>{1}, 500), DomainError);
}

TEST(Cumulants, ThirdCumulantOfInnerCountMatchesExact)
{
    const ObservableGrid g{1, {0, 0}, {0, 0}};
    const std::vector<int> o{3, 0};
    double prev = 1.0;
    for (long n : {1024L, 4096L, 8192L}) {
        const double a = cumulant_asymptotics(wide, g, o, n);
        const double e = exact_third_cumulant(mode_probabilities(wide, g, n), 0);
        EXPECT_LT(std::fabs(a - e), prev);
        prev = std::fabs(a - e);
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(Clt, CorrelationMatrixShape)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = 1 + trial % 3;
        const ObservableGrid g = random_grid(rng, m, false, false);
        const auto s = clt_covariance(figure_params(0.5 + 0.5 * (trial % 3)), g);
        const int c = 2 * m;
        std::vector<std::vector<double>> ch = s;
        for (int l = 0; l < c; ++l) {
            EXPECT_EQ(s[l][l], 1.0);
            for (int k = 0; k < c; ++k) {
                EXPECT_EQ(s[l][k], s[k][l]);
                if (g.is_inner(l) != g.is_inner(k)) {
                    EXPECT_EQ(s[l][k], 0.0);
                }
                EXPECT_LE(std::fabs(s[l][k]), 1.0 + 1e-12);
            }
        }
        for (int k = 0; k < c; ++k) {
            ASSERT_GT(ch[k][k], -1e-10) << trial;
            const double d = std::sqrt(std::max(ch[k][k], 0.0));
            for (int i = k + 1; i < c; ++i) {
                ch[i][k] = d > 0 ? ch[i][k] / d : 0.0;
                for (int j = k + 1; j <= i; ++j)
                    ch[i][j] -= ch[i][k] * ch[j][k];
            }
        }
    }
    EXPECT_THROW(clt_covariance(ref, {1, {0, 1}, {0, 0}}), DomainError);
    EXPECT_THROW(clt_covariance(ref, {1, {1, 0}, {0, 0}}), DomainError);
}
