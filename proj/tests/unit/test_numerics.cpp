#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hardedge/numerics/finite_difference.hpp"
#include "hardedge/numerics/parallel.hpp"
#include "hardedge/numerics/quadrature.hpp"
#include "hardedge/numerics/summation.hpp"

using namespace hardedge::numerics;

TEST(CompensatedSum, RecoversSmallTermsNextToLargeOnes)
{
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000000; ++i)
        s.add(1e-16);
    s.add(-1.0);
    // the correction term is itself a plain sum of 1e6 terms
    EXPECT_NEAR(s.value(), 1e-10, 1e-19);
    double naive = 1.0;
    for (int i = 0; i < 1000000; ++i)
        naive += 1e-16;
    EXPECT_EQ(naive - 1.0, 0.0);
}

TEST(CompensatedSum, MergeMatchesSequential)
{
    CompensatedSum a, b, all;
    for (int i = 1; i <= 1000; ++i) {
        const double x = 1.0 / i;
        (i % 2 ? a : b).add(x);
        all.add(x);
    }
    // merged order differs from sequential, both compensated
    a.merge(b);
    EXPECT_NEAR(a.value(), all.value(), 1e-15);
}

TEST(Fornberg, CentralSecondDerivativeWeights)
{
    const Stencil s = central_stencil(2, 2);
    ASSERT_EQ(s.weights.size(), 3u);
    EXPECT_NEAR(s.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(s.weights[1], -2.0, 1e-15);
    EXPECT_NEAR(s.weights[2], 1.0, 1e-15);
}

TEST(MixedPartial, PolynomialAndExponential)
{
    auto f = [](const std::vector<double>& x) { return std::exp(x[0] + 2.0 * x[1]) + x[0] * x[0] * x[1]; };
    const std::vector<double> x0{0.3, -0.2};
    const std::vector<int> o11{1, 1};
    // d^2/dx dy = 2 e^{x+2y} + 2x
    const double expect = 2.0 * std::exp(0.3 - 0.4) + 0.6;
    EXPECT_NEAR(mixed_partial(f, x0, o11, 1e-2), expect, 1e-9);
    const std::vector<int> o30{3, 0};
    EXPECT_NEAR(mixed_partial(f, x0, o30, 3e-2), std::exp(-0.1), 1e-8);
}

TEST(Quadrature, SmoothIntegrals)
{
    const auto r = integrate([](double x) { return std::exp(-x * x); }, 0.0, 3.0, 1e-13);
    EXPECT_NEAR(r.value, 0.5 * std::sqrt(std::numbers::pi) * std::erf(3.0), 1e-14);
    EXPECT_NEAR(integrate_fixed([](double x) { return std::cos(x); }, 0.0, 1.0, 4), std::sin(1.0), 1e-15);
}

TEST(Parallel, ChunksCoverRangeOnceAndPropagateErrors)
{
    std::vector<int> hits(1000, 0);
    parallel_chunks(hits.size(), 7, 4, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            ++hits[i];
    });
    for (int h : hits)
        EXPECT_EQ(h, 1);
    EXPECT_THROW(parallel_chunks(10, 1, 3,
                                 [](std::size_t b, std::size_t) {
                                     if (b == 5)
                                         throw std::runtime_error("boom");
                                 }),
                 std::runtime_error);
}
