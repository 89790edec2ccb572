#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hardedge/error.hpp"
#include "hardedge/model.hpp"
#include "hardedge/numerics/quadrature.hpp"

using namespace hardedge;

namespace {

ObservableGrid random_grid(std::mt19937_64& rng, int m, double u_lo, double u_hi, bool allow_zero = true)
{
    std::uniform_real_distribution<double> t(0.0, 4.0);
    std::uniform_real_distribution<double> u(u_lo, u_hi);
    std::vector<double> inner(m), outer(m);
    for (auto& v : inner)
        v = t(rng);
    for (auto& v : outer)
        v = t(rng);
    std::sort(inner.begin(), inner.end(), std::greater<>());
    std::sort(outer.begin(), outer.end());
    if (allow_zero && (rng() % 3 == 0)) {
        inner.back() = 0.0;
        outer.front() = 0.0;
    }
    ObservableGrid g{m, {}, {}};
    g.t = inner;
    g.t.insert(g.t.end(), outer.begin(), outer.end());
    for (int i = 0; i < 2 * m; ++i)
        g.u.push_back(u(rng));
    return g;
}

// (1/2pi) int ln(1/|s - r e^{i phi}|) dphi by direct quadrature.
double circle_average(double s, double r)
{
    return numerics::integrate(
               [&](double phi) {
                   return -0.5 * std::log(s * s + r * r - 2.0 * s * r * std::cos(phi));
               },
               0.0, std::numbers::pi, 1e-13)
               .value /
           std::numbers::pi;
}

}  // namespace

TEST(ModelParams, Validation)
{
    EXPECT_NO_THROW((ModelParams{1.0, 0.0, 0.6, 0.8}.validate()));
    EXPECT_THROW((ModelParams{0.0, 0.0, 0.6, 0.8}.validate()), DomainError);
    EXPECT_THROW((ModelParams{1.0, -1.0, 0.6, 0.8}.validate()), DomainError);
    EXPECT_THROW((ModelParams{1.0, 0.0, 0.8, 0.6}.validate()), DomainError);
    EXPECT_THROW((ModelParams{1.0, 0.0, 0.6, 1.0}.validate()), DomainError);
    EXPECT_THROW((ModelParams{1.0, 0.0, 0.6, 0.6}.validate()), DomainError);
}

TEST(ObservableGrid, Validation)
{
    EXPECT_NO_THROW((ObservableGrid{1, {1, 1}, {0.5, -0.3}}.validate()));
    EXPECT_NO_THROW((ObservableGrid{2, {2, 0, 0, 1}, {0, 0, 0, 0}}.validate()));
    EXPECT_THROW((ObservableGrid{2, {1, 2, 0, 1}, {0, 0, 0, 0}}.validate()), DomainError);
    EXPECT_THROW((ObservableGrid{2, {2, 1, 1, 1}, {0, 0, 0, 0}}.validate()), DomainError);
    EXPECT_THROW((ObservableGrid{1, {-1, 1}, {0, 0}}.validate()), DomainError);
    EXPECT_THROW((ObservableGrid{1, {1, 1}, {0}}.validate()), DomainError);
}

TEST(Weights, SumIdentity)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const ObservableGrid g = random_grid(rng, 1 + static_cast<int>(rng() % 4), -10.0, 3.0);
        const Weights w = make_weights(g.u);
        double s = 1.0, scale = 1.0;
        for (double o : w.omega) {
            s += o;
            scale += std::fabs(o);
        }
        EXPECT_LT(std::fabs(s - w.Omega) / scale, 1e-14);
    }
    const Weights tiny = make_weights({1e-12, -2e-12});
    EXPECT_NEAR(tiny.omega[1], -2e-12 + 2e-24, 1e-27);
    EXPECT_NEAR(tiny.omega[0], 1e-12 * (1.0 - 1.5e-12), 1e-27);
}

TEST(Equilibrium, ReferenceValues)
{
    const EquilibriumData eq = equilibrium({1.0, 0.0, 0.6, 0.8});
    EXPECT_NEAR(eq.sigma_star, 0.28 / (2.0 * std::log(4.0 / 3.0)), 1e-15);
    EXPECT_NEAR(eq.sigma_star, 0.4866483295, 1e-10);
    EXPECT_NEAR(eq.sigma1 + eq.sigma2, 0.28, 1e-15);
    EXPECT_NEAR(eq.sigma_star, 0.36 + eq.sigma1, 1e-15);

    const EquilibriumData thin = equilibrium({1.0, 0.0, 0.6, 0.6 * (1 + 1e-9)});
    EXPECT_NEAR(thin.sigma_star, 0.36, 1e-9);
    EXPECT_LT(thin.sigma1, 1e-8);
    EXPECT_LT(thin.sigma2, 1e-8);
    EXPECT_GT(thin.sigma1, 0.0);

    const EquilibriumData half = equilibrium(figure_params(0.5));
    EXPECT_GT(half.sigma1, 0.0);
    EXPECT_GT(half.sigma2, 0.0);
}

TEST(Balayage, QuadratureMatchesClosedForm)
{
    for (double b : {0.5, 1.0, 2.0}) {
        const ModelParams p = figure_params(b);
        const EquilibriumData eq = equilibrium(p);
        const BalayageResult r = balayage_radial(p);
        EXPECT_NEAR(r.sigma1, eq.sigma1, 1e-10) << b;
        EXPECT_NEAR(r.sigma2, eq.sigma2, 1e-10) << b;
        EXPECT_NEAR(r.C2, b * (p.rho2_pow() - p.rho1_pow()), 1e-12);
        const double C1 = -b * p.rho2_pow() * std::log(p.rho2) + b * p.rho1_pow() * std::log(p.rho1) +
                          0.5 * (p.rho2_pow() - p.rho1_pow());
        EXPECT_NEAR(r.C1, C1, 1e-12);
    }
}

TEST(Balayage, PotentialsAgreeOffTheAnnulus)
{
    for (double b : {0.5, 1.0, 2.0}) {
        const ModelParams p = figure_params(b);
        const EquilibriumData eq = equilibrium(p);
        for (double s : {0.5 * p.rho1, 2.0 * p.rho2}) {
            // direct: radial density 2 b^2 r^{2b-1} times the circle average
            const double direct_mu = numerics::integrate(
                                         [&](double r) {
                                             return 2.0 * b * b * std::pow(r, 2.0 * b - 1.0) * circle_average(s, r);
                                         },
                                         p.rho1, p.rho2, 1e-12)
                                         .value;
            const double direct_hat = eq.sigma1 * circle_average(s, p.rho1) + eq.sigma2 * circle_average(s, p.rho2);
            EXPECT_NEAR(direct_mu, direct_hat, 1e-10) << "b=" << b << " s=" << s;
            EXPECT_NEAR(log_potential_annulus_part(p, s), direct_mu, 1e-10);
            EXPECT_NEAR(log_potential_balayage(p, eq, s), direct_hat, 1e-10);
        }
    }
}

TEST(Equilibrium, MassSplit)
{
    for (double b : {0.25, 0.5, 1.0, 2.0, 3.0}) {
        const ModelParams p = figure_params(b, 0.3);
        const EquilibriumData eq = equilibrium(p);
        const MassSplit m = equilibrium_mass_split(p);
        EXPECT_NEAR(m.inner, eq.sigma_star, 1e-9) << b;
        EXPECT_NEAR(m.outer, 1.0 - eq.sigma_star, 1e-9) << b;
    }
}

TEST(TFunctions, ZeroWeightsAndWallValues)
{
    const ModelParams p{1.0, 0.0, 0.6, 0.8};
    const Observable zero(p, {2, {3, 1, 0.5, 2}, {0, 0, 0, 0}});
    for (int j = 0; j <= 2; ++j) {
        const TValues t = T_funcs(0.5, zero, j);
        EXPECT_EQ(t.T, 0.0);
        EXPECT_EQ(t.That, 0.0);
    }
    const std::vector<double> u{0.4, -0.7, 1.1, 0.2};
    const Observable a(p, {2, {3, 1, 0.5, 2}, u});
    const Observable b(p, {2, {5, 0.2, 0.1, 7}, u});
    EXPECT_NEAR(a.T(0, a.x_inner()), b.T(0, b.x_inner()), 1e-15);
    EXPECT_NEAR(a.That(0, a.x_outer()), b.That(0, b.x_outer()), 1e-15);
    EXPECT_NEAR(a.phi_inner(a.x_inner()), a.Omega(), 1e-14);
    EXPECT_NEAR(a.phi_outer(a.x_outer()), 1.0, 1e-15);
    EXPECT_THROW(T_funcs(0.5, a, 3), DomainError);

    const Observable single(p, {1, {0, 0}, {0.7, 0.0}});
    EXPECT_EQ(single.That(0, single.x_outer()), 0.0);
    EXPECT_NEAR(std::log(mathsf_Q(single)), 0.7, 1e-15);
}

TEST(FFunctions, VanishingCasesAndWallGuard)
{
    const ModelParams p{1.0, 0.4, 0.6, 0.8};
    const Observable zero_u(p, {1, {2, 3}, {0, 0}});
    const FValues f0 = f_funcs(0.5, zero_u);
    EXPECT_EQ(f0.f, 0.0);
    EXPECT_EQ(f0.fhat, 0.0);
    const Observable zero_t(p, {1, {0, 0}, {0.5, -0.2}});
    EXPECT_EQ(f_funcs(0.5, zero_t).f, 0.0);
    EXPECT_THROW(f_funcs(zero_t.x_inner() + 1e-13, zero_t), DomainError);
    EXPECT_THROW(f_funcs(zero_t.x_outer() - 1e-13, zero_t), DomainError);
    EXPECT_NO_THROW(f_funcs(zero_t.x_inner() + 1e-9, zero_t));
}

TEST(FFunctions, DenominatorsPositive)
{
    std::mt19937_64 rng(99);
    const ModelParams p{1.0, 0.0, 0.6, 0.8};
    for (int i = 0; i < 200; ++i) {
        const Observable o(p, random_grid(rng, 1 + static_cast<int>(rng() % 3), -10.0, 3.0));
        const double x = o.x_inner() + (o.x_outer() - o.x_inner()) * std::uniform_real_distribution<double>(0.01, 0.99)(rng);
        EXPECT_GT(o.phi_inner(x), 0.0);
        EXPECT_GT(o.phi_outer(x), 0.0);
        EXPECT_TRUE(std::isfinite(f_funcs(x, o).f));
    }
}

TEST(Q, Basics)
{
    const ModelParams p{2.0, 0.0, 0.5, 0.7};
    EXPECT_EQ(mathsf_Q(Observable(p, {1, {1, 1}, {0, 0}})), 1.0);
    EXPECT_NEAR(std::log(mathsf_Q(Observable(p, {1, {0, 0}, {-1.3, 0}}))), -1.3, 1e-15);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i)
        EXPECT_GT(mathsf_Q(Observable(p, random_grid(rng, 2, -10.0, 3.0))), 0.0);
}

TEST(Radii, FormulaAndOrdering)
{
    const ModelParams p{1.0, 0.0, 0.6, 0.8};
    const auto r = radii({1, {1, 0}, {0, 0}}, p, 100);
    EXPECT_DOUBLE_EQ(r[0], 0.6 * std::sqrt(0.99));
    EXPECT_EQ(r[1], 0.8);
    EXPECT_EQ(radii({1, {0, 0}, {0, 0}}, p, 10)[0], 0.6);
    EXPECT_THROW(radii({1, {5, 0}, {0, 0}}, p, 5), DomainError);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const ObservableGrid g = random_grid(rng, 3, 0, 0);
        const auto rr = radii(g, figure_params(0.5 + (i % 4) * 0.5), 1000);
        for (std::size_t k = 1; k < rr.size(); ++k)
            EXPECT_LT(rr[k - 1], rr[k]);
    }
}

TEST(Denominators, SummationByPartsMatchesDirectSum)
{
    std::mt19937_64 rng(17);
    const ModelParams p = figure_params(1.5, 0.2);
    for (int i = 0; i < 100; ++i) {
        const Observable o(p, random_grid(rng, 1 + i % 3, -1.0, 1.0));
        for (int k = 0; k <= 10; ++k) {
            const double x = o.x_inner() + (o.x_outer() - o.x_inner()) * k / 10.0;
            EXPECT_NEAR(o.phi_inner(x), 1.0 + o.T(0, x) + o.That0_wall(), 1e-13);
            EXPECT_NEAR(o.phi_outer(x), 1.0 - o.That(0, x) + o.That0_wall(), 1e-13);
        }
    }
    // very negative exponents: the direct sum cancels to zero, the wall value is Omega
    const Observable deep(p, {2, {3, 1, 1, 3}, {-30, -25, -20, -10}});
    EXPECT_NEAR(deep.phi_inner(deep.x_inner()) / deep.Omega(), 1.0, 1e-14);
    EXPECT_GT(deep.phi_inner(0.5 * (deep.x_inner() + deep.x_outer())), 0.0);
    EXPECT_NEAR(deep.phi_outer(deep.x_outer()), 1.0, 1e-15);
}
