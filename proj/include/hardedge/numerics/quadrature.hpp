#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <string>

#include "hardedge/error.hpp"

namespace hardedge::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
};

/// Composite 61-point Gauss-Kronrod on equal panels, doubling the panel count
/// until the summed Kronrod-Gauss error estimate drops below abs_tol.
///
/// Unlike bisection-driven adaptivity, the node set depends only on the
/// interval and the panel count. Integrals of a smooth parametric family are
/// then smooth in the parameter, which finite-difference derivatives rely on.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                           std::size_t min_panels = 2, std::size_t max_panels = 4096)
{
    using boost::math::quadrature::gauss_kronrod;
    if (a == b)
        return {0.0, 0.0, 0};
    QuadratureResult r;
    for (std::size_t panels = min_panels; panels <= max_panels; panels *= 2) {
        const double h = (b - a) / static_cast<double>(panels);
        double value = 0.0;
        double err = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            const double lo = a + h * static_cast<double>(p);
            const double hi = (p + 1 == panels) ? b : lo + h;
            double e = 0.0;
            value += gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0, &e);
            err += e;
        }
        r = {value, err, panels};
        if (!std::isfinite(value))
            throw ConvergenceError("quadrature: non-finite integrand value");
        if (err <= abs_tol)
            return r;
    }
    throw ConvergenceError("quadrature: error estimate " + std::to_string(r.error) +
                           " above tolerance " + std::to_string(abs_tol));
}

/// Fixed composite rule, no refinement: a smooth function of any parameter the
/// integrand depends on.
template <class F>
double integrate_fixed(F&& f, double a, double b, std::size_t panels)
{
    using boost::math::quadrature::gauss_kronrod;
    const double h = (b - a) / static_cast<double>(panels);
    double value = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double hi = (p + 1 == panels) ? b : lo + h;
        value += gauss_kronrod<double, 61>::integrate(f, lo, hi, 0, 0.0, nullptr);
    }
    return value;
}

}  // namespace hardedge::numerics
