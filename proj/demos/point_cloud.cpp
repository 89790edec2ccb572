// One n = 4096 sample for b = 1/2, 1, 2 with walls at 3/5 and 4/5 of the
// droplet radius. Prints the radial profile; no point falls in the gap.

#include <hardedge/sampler.hpp>

#include <cmath>
#include <cstdio>
#include <vector>

int main()
{
    for (double b : {0.5, 1.0, 2.0}) {
        const hardedge::ModelParams p = hardedge::figure_params(b);
        const auto pts = hardedge::export_point_cloud(p, 4096, 2024);
        const double R = p.droplet_radius();
        std::vector<int> bins(10, 0);
        long in_gap = 0;
        for (const auto& [x, y] : pts) {
            const double r = std::hypot(x, y);
            in_gap += (r > p.rho1 && r < p.rho2) ? 1 : 0;
            ++bins[std::min(9, static_cast<int>(10.0 * r / R))];
        }
        std::printf("b = %.1f  points in gap: %ld  radial deciles:", b, in_gap);
        for (int c : bins)
            std::printf(" %d", c);
        std::printf("\n");
    }
}
