#pragma once

#include <vector>

namespace layerfem {

/// n-point Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
};

/// Throws std::out_of_range unless 1 <= n <= 16.
QuadratureRule gauss_rule(int n);

/// The same rule affinely mapped to [a, b].
QuadratureRule gauss_rule_on(int n, double a, double b);

}  // namespace layerfem
