// Var N(rho1) at finite n: exact value, the expansion, and its oscillating
// Weierstrass part, over a run of consecutive n.

#include <hardedge/asymptotic.hpp>
#include <hardedge/exact.hpp>

#include <cmath>
#include <cstdio>

int main()
{
    // A wide gap makes the oscillation visible at moderate n.
    const hardedge::ModelParams p{1.0, 0.0, 0.15, 0.95};
    const hardedge::ObservableGrid wall{1, {0.0, 0.0}, {0.0, 0.0}};
    std::printf("1 / (2 ln(rho2/rho1)) = %.6f\n", 1.0 / (2.0 * p.log_ratio()));
    std::printf("%6s %12s %12s %12s\n", "n", "exact", "expansion", "oscillation");
    for (long n = 2048; n < 2048 + 12; ++n) {
        const auto mp = hardedge::mode_probabilities(p, wall, n);
        const double exact = hardedge::exact_moments(mp).cov[0][0];
        const hardedge::ExpansionTerms t = hardedge::covariance_asymptotics(p, wall, 0, 0, n);
        std::printf("%6ld %12.6f %12.6f %12.6f\n", n, exact, t.value(), t.f);
    }
}
