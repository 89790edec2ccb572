#pragma once

// ln E_n as a product over modes of ratios of integrals in the modulus x,
// each weighted by exp(sum_l u_l 1{x < r_l}). Test-only.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <vector>

#include "hardedge/model.hpp"

namespace oracle {

inline double log_mgf_by_quadrature(const hardedge::ModelParams& p, const hardedge::ObservableGrid& g, long n)
{
    const std::vector<double> r = hardedge::radii(g, p, n);
    const double nn = static_cast<double>(n);
    const double x_max = std::pow(60.0 / nn, 1.0 / (2.0 * p.b)) + p.rho2;
    std::vector<double> cuts{0.0};
    for (int l = 0; l < g.m; ++l)
        cuts.push_back(r[l]);
    cuts.push_back(p.rho1);
    cuts.push_back(p.rho2);
    for (int l = g.m; l < g.size(); ++l)
        cuts.push_back(r[l]);
    cuts.push_back(x_max);
    boost::math::quadrature::tanh_sinh<double> ts;
    double total = 0.0;
    for (long j = 1; j <= n; ++j) {
        const double power = 2.0 * static_cast<double>(j) + 2.0 * p.alpha - 1.0;
        auto density = [&](double x) { return std::pow(x, power) * std::exp(-nn * std::pow(x, 2.0 * p.b)); };
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double lo = cuts[k], hi = cuts[k + 1];
            if (hi <= lo || (lo >= p.rho1 && hi <= p.rho2))
                continue;
            const double mid = 0.5 * (lo + hi);
            double e = 0.0;
            for (int l = 0; l < g.size(); ++l)
                if (mid < r[l])
                    e += g.u[l];
            const double v = ts.integrate(density, lo, hi, 1e-14);
            num += std::exp(e) * v;
            den += v;
        }
        total += std::log(num / den);
    }
    return total;
}

}  // namespace oracle
