#include "layerfem/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace layerfem;

TEST(Gauss, OnePoint)
{
    const QuadratureRule r = gauss_rule(1);
    ASSERT_EQ(r.size(), 1);
    EXPECT_EQ(r.points[0], 0.0);
    EXPECT_DOUBLE_EQ(r.weights[0], 2.0);
}

TEST(Gauss, TwoPoints)
{
    const QuadratureRule r = gauss_rule(2);
    ASSERT_EQ(r.size(), 2);
    EXPECT_NEAR(r.points[0], -1.0 / std::sqrt(3.0), 2e-16);
    EXPECT_NEAR(r.points[1], 1.0 / std::sqrt(3.0), 2e-16);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
}

TEST(Gauss, ThreePointsIntegrateX4)
{
    const QuadratureRule r = gauss_rule(3);
    double s = 0.0;
    for (int q = 0; q < 3; ++q) {
        s += r.weights[static_cast<std::size_t>(q)] * std::pow(r.points[static_cast<std::size_t>(q)], 4);
    }
    EXPECT_LE(std::abs(s - 0.4), 4 * std::numeric_limits<double>::epsilon() * 0.4);
}

TEST(Gauss, ExactUpToDegree2nMinus1)
{
    for (int n = 1; n <= 16; ++n) {
        const QuadratureRule r = gauss_rule(n);
        double wsum = 0.0;
        for (double w : r.weights) {
            wsum += w;
        }
        EXPECT_NEAR(wsum, 2.0, 1e-14) << n;
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0.0;
            for (int q = 0; q < n; ++q) {
                s += r.weights[static_cast<std::size_t>(q)] * std::pow(r.points[static_cast<std::size_t>(q)], d);
            }
            const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
            EXPECT_NEAR(s, exact, 1e-14) << "n=" << n << " d=" << d;
        }
    }
}

TEST(Gauss, NotExactBeyond2nMinus1)
{
    const QuadratureRule r = gauss_rule(2);
    double s = 0.0;
    for (int q = 0; q < 2; ++q) {
        s += r.weights[static_cast<std::size_t>(q)] * std::pow(r.points[static_cast<std::size_t>(q)], 4);
    }
    EXPECT_GT(std::abs(s - 0.4), 0.1);
}

TEST(Gauss, RejectsOutOfRange)
{
    EXPECT_THROW(gauss_rule(0), std::out_of_range);
    EXPECT_THROW(gauss_rule(17), std::out_of_range);
}

TEST(Gauss, MappedInterval)
{
    const QuadratureRule r = gauss_rule_on(4, 2.0, 5.0);
    double s = 0.0;
    for (int q = 0; q < 4; ++q) {
        const double x = r.points[static_cast<std::size_t>(q)];
        s += r.weights[static_cast<std::size_t>(q)] * x * x * x;
    }
    EXPECT_NEAR(s, (625.0 - 16.0) / 4.0, 1e-12);
}
