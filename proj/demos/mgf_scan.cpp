// Exact log E[exp(u . N)] against the large-n expansion for the reference
// geometry, with and without the theta-function term F_n.

#include <hardedge/asymptotic.hpp>
#include <hardedge/exact.hpp>

#include <cmath>
#include <cstdio>

int main()
{
    const hardedge::ModelParams p{1.0, 0.0, 0.6, 0.8};
    const hardedge::ObservableGrid g{1, {1.0, 1.0}, {0.5, -0.3}};
    const hardedge::AsymptoticExpansion e = hardedge::constants(p, g);
    std::printf("C1 = %.12f  C2 = %.12f  C3 = %.12f  C4 = %.12f\n", e.C1, e.C2, e.C3, e.C4);
    std::printf("%8s %22s %12s %12s\n", "n", "exact", "err", "err w/o F_n");
    for (long n = 200; n <= 12800; n *= 2) {
        const double exact = hardedge::log_mgf_exact(p, g, n);
        std::printf("%8ld %22.12f %12.3e %12.3e\n", n, exact, std::fabs(exact - e.log_mgf(n)),
                    std::fabs(exact - e.smooth_part(n)));
    }
}
