#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace hardedge::numerics {

/// Fornberg's algorithm: weights w_i such that sum_i w_i f(x_i) approximates
/// f^(derivative)(0) on the given offsets.
inline std::vector<double> fornberg_weights(int derivative, std::span<const double> x)
{
    const int n = static_cast<int>(x.size());
    if (derivative < 0 || derivative >= n)
        throw std::invalid_argument("fornberg_weights: not enough nodes");
    std::vector<std::vector<double>> c(n, std::vector<double>(derivative + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, derivative);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = c[i][derivative];
    return w;
}

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // for unit step
};

/// Central stencil of the given even accuracy order.
inline Stencil central_stencil(int derivative, int accuracy)
{
    if (derivative == 0)
        return {{0}, {1.0}};
    const int half = (derivative + 1) / 2 + accuracy / 2 - 1;
    Stencil s;
    std::vector<double> x;
    for (int k = -half; k <= half; ++k) {
        s.offsets.push_back(k);
        x.push_back(static_cast<double>(k));
    }
    s.weights = fornberg_weights(derivative, x);
    return s;
}

/// Mixed partial derivative d^orders f at x0 by a tensor product of central
/// stencils with step h, refined by one Richardson step (h, h/2).
template <class F>
double mixed_partial(F&& f, std::span<const double> x0, std::span<const int> orders, double h,
                     int accuracy = 4)
{
    const std::size_t dim = x0.size();
    std::vector<Stencil> stencils;
    std::vector<std::size_t> active;
    int total = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (orders[i] > 0) {
            stencils.push_back(central_stencil(orders[i], accuracy));
            active.push_back(i);
            total += orders[i];
        }
    }
    if (total == 0)
        return f(std::vector<double>(x0.begin(), x0.end()));

    auto estimate = [&](double step) {
        std::vector<std::size_t> idx(stencils.size(), 0);
        std::vector<double> x(x0.begin(), x0.end());
        double acc = 0.0;
        while (true) {
            double w = 1.0;
            for (std::size_t a = 0; a < stencils.size(); ++a) {
                const auto& s = stencils[a];
                x[active[a]] = x0[active[a]] + step * s.offsets[idx[a]];
                w *= s.weights[idx[a]];
            }
            if (w != 0.0)
                acc += w * f(x);
            std::size_t a = 0;
            for (; a < stencils.size(); ++a) {
                if (++idx[a] < stencils[a].offsets.size())
                    break;
                idx[a] = 0;
            }
            if (a == stencils.size())
                break;
        }
        return acc / std::pow(step, total);
    };
    const double coarse = estimate(h);
    const double fine = estimate(h / 2);
    const double k = std::pow(2.0, accuracy);
    return (k * fine - coarse) / (k - 1.0);
}

}  // namespace hardedge::numerics
