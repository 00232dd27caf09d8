#include "layerfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace layerfem {

QuadratureRule gauss_rule(int n)
{
    if (n < 1 || n > 16) {
        throw std::out_of_range("gauss_rule: point count " + std::to_string(n) +
                                " outside [1, 16]");
    }
    QuadratureRule rule;
    rule.points.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Newton iteration on P_n from the Chebyshev-like initial guess; roots are
    // symmetric so only half are computed.
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[static_cast<std::size_t>(i)] = -x;
        rule.points[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) {
        rule.points[static_cast<std::size_t>(n / 2)] = 0.0;
    }
    return rule;
}

QuadratureRule gauss_rule_on(int n, double a, double b)
{
    QuadratureRule rule = gauss_rule(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int q = 0; q < rule.size(); ++q) {
        rule.points[static_cast<std::size_t>(q)] = mid + half * rule.points[static_cast<std::size_t>(q)];
        rule.weights[static_cast<std::size_t>(q)] *= half;
    }
    return rule;
}

}  // namespace layerfem
