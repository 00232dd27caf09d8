#include "layerfem/fespace.hpp"
#include "layerfem/interp.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

using namespace layerfem;
using test::layer_space;
using test::roos;
using test::uniform_space;

TEST(ReferenceElement, LagrangeProperty)
{
    for (int k = 1; k <= 3; ++k) {
        const ReferenceElement ref(k);
        EXPECT_EQ(ref.nodes().front(), -1.0);
        EXPECT_EQ(ref.nodes().back(), 1.0);
        for (int i = 0; i <= k; ++i) {
            for (int j = 0; j <= k; ++j) {
                EXPECT_NEAR(ref.value(j, ref.nodes()[static_cast<std::size_t>(i)]), i == j ? 1.0 : 0.0, 1e-15);
            }
        }
    }
}

TEST(ReferenceElement, DerivativeMatchesDifferenceQuotient)
{
    const ReferenceElement ref(3);
    for (int j = 0; j <= 3; ++j) {
        for (double t : {-0.9, -0.2, 0.35, 0.8}) {
            const double h = 1e-6;
            const double fd = (ref.value(j, t + h) - ref.value(j, t - h)) / (2 * h);
            EXPECT_NEAR(ref.derivative(j, t), fd, 1e-8);
        }
    }
}

TEST(ReferenceElement, PartitionOfUnity)
{
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 1; k <= 3; ++k) {
        const ReferenceElement ref(k);
        for (int s = 0; s < 100; ++s) {
            const double x = u(gen);
            const double y = u(gen);
            double sum = 0.0;
            for (int b = 0; b <= k; ++b) {
                for (int a = 0; a <= k; ++a) {
                    sum += ref.value(a, x) * ref.value(b, y);
                }
            }
            EXPECT_LE(std::abs(sum - 1.0), 8 * std::numeric_limits<double>::epsilon());
        }
    }
}

TEST(ReferenceElement, RejectsDegree)
{
    EXPECT_THROW(ReferenceElement(0), std::invalid_argument);
    EXPECT_THROW(ReferenceElement(4), std::invalid_argument);
    EXPECT_THROW(uniform_space(4, 4), std::invalid_argument);
}

TEST(FeSpace, Counts)
{
    auto s = uniform_space(4, 1);
    EXPECT_EQ(s->dof_count(), 25);
    EXPECT_EQ(s->interior_dof_count(), 9);
    s = uniform_space(4, 2);
    EXPECT_EQ(s->dof_count(), 81);
    EXPECT_EQ(s->interior_dof_count(), 49);
    s = layer_space(roos(12, 1e-3, 2.0), 3);
    EXPECT_EQ(s->dof_count(), 1369);
    EXPECT_EQ(s->interior_dof_count(), 35 * 35);
}

TEST(FeSpace, BoundaryMaskIsLatticeBoundary)
{
    const auto s = uniform_space(4, 2);
    int count = 0;
    for (int d = 0; d < s->dof_count(); ++d) {
        const int l = s->lattice_x(d);
        const int m = s->lattice_y(d);
        const bool edge = l == 0 || m == 0 || l == 8 || m == 8;
        EXPECT_EQ(s->on_boundary(d), edge);
        count += edge ? 1 : 0;
    }
    EXPECT_EQ(count, 32);
}

TEST(FeSpace, SharedEdgeDofsHaveOneIndex)
{
    const auto s = uniform_space(3, 3);
    const auto left = s->element_dofs(0, 1);
    const auto right = s->element_dofs(1, 1);
    for (int q = 0; q <= 3; ++q) {
        EXPECT_EQ(left[static_cast<std::size_t>(3 + 4 * q)], right[static_cast<std::size_t>(4 * q)]);
    }
    const auto below = s->element_dofs(1, 0);
    for (int p = 0; p <= 3; ++p) {
        EXPECT_EQ(below[static_cast<std::size_t>(p + 12)], right[static_cast<std::size_t>(p)]);
    }
}

TEST(FeSpace, NodesAreEquispacedInsideElements)
{
    const auto s = layer_space(roos(12, 1e-3, 2.0), 3);
    const auto& m = s->mesh();
    for (int i = 0; i < 12; ++i) {
        for (int p = 0; p <= 3; ++p) {
            EXPECT_NEAR(s->node(3 * i + p), m.x(i) + (m.x(i + 1) - m.x(i)) * p / 3.0, 1e-16);
        }
    }
}

TEST(FeFunction, InterpolantOfXReproducesX)
{
    for (int k = 1; k <= 3; ++k) {
        const auto s = layer_space(roos(16, 1e-3, 2.0), k);
        const FeFunction f = lagrange_interp(ScalarField::affine(0.0, 1.0, 0.0), s);
        const ValueGradient v = f.eval(0.3, 0.7);
        EXPECT_NEAR(v.value, 0.3, 1e-14);
        EXPECT_NEAR(v.gradient[0], 1.0, 1e-12);
        EXPECT_NEAR(v.gradient[1], 0.0, 1e-12);
    }
}

TEST(FeFunction, ZeroFunction)
{
    const FeFunction f(uniform_space(4, 2));
    const ValueGradient v = f.eval(0.41, 0.13);
    EXPECT_EQ(v.value, 0.0);
    EXPECT_EQ(v.gradient[0], 0.0);
    EXPECT_EQ(v.gradient[1], 0.0);
}

TEST(FeFunction, BilinearOnUnitSquare)
{
    const FeFunction f = lagrange_interp(ScalarField([](double x, double y) { return x * y; }), uniform_space(1, 1));
    const ValueGradient v = f.eval(0.5, 0.5);
    EXPECT_DOUBLE_EQ(v.value, 0.25);
    EXPECT_DOUBLE_EQ(v.gradient[0], 0.5);
    EXPECT_DOUBLE_EQ(v.gradient[1], 0.5);
}

TEST(FeFunction, ReproducesQkAtRandomPoints)
{
    std::mt19937 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 1; k <= 3; ++k) {
        const auto s = layer_space(roos(24, 1e-4, 2.0), k);
        const ScalarField q([k](double x, double y) { return std::pow(1.0 + x, k) * std::pow(2.0 - y, k) - x * y; });
        const FeFunction f = lagrange_interp(q, s);
        for (int n = 0; n < 50; ++n) {
            const double x = u(gen);
            const double y = u(gen);
            EXPECT_NEAR(f.eval(x, y).value, q(x, y), 1e-13 * std::abs(q(x, y)) + 1e-15);
        }
    }
}

TEST(FeFunction, RejectsPointsOutsideDomain)
{
    const FeFunction f(uniform_space(2, 1));
    EXPECT_THROW((void)f.eval(1.5, 0.2), std::out_of_range);
    EXPECT_THROW((void)f.eval(0.2, -0.1), std::out_of_range);
}

TEST(FeFunction, CoefficientCountMustMatch)
{
    EXPECT_THROW(FeFunction(uniform_space(2, 1), std::vector<double>(5)), std::invalid_argument);
}

TEST(SelectDofs, MeshLineRow)
{
    const auto s = uniform_space(4, 1);
    const auto d = select_dofs_on_line(*s, Axis::horizontal, 0.5);
    ASSERT_EQ(d.size(), 5u);
    for (int v : d) {
        EXPECT_EQ(s->lattice_y(v), 2);
    }
    EXPECT_THROW(select_dofs_on_line(*s, Axis::horizontal, 0.3), std::invalid_argument);
}

TEST(SelectDofs, DomainBoundaryK2)
{
    const auto s = uniform_space(4, 2);
    EXPECT_EQ(select_dofs(*s, s->subdomains().domain_boundary).size(), 32u);
}

TEST(SelectDofs, OmegaZeroStarRingN16)
{
    const auto s = layer_space(roos(16, 1e-3, 2.0), 1);
    const auto d = select_dofs(*s, s->subdomains().omega0_star_boundary);
    ASSERT_EQ(d.size(), 40u);
    for (int v : d) {
        const int l = s->lattice_x(v);
        const int m = s->lattice_y(v);
        EXPECT_TRUE(l == 3 || l == 13 || m == 3 || m == 13);
        EXPECT_TRUE(l >= 3 && l <= 13 && m >= 3 && m <= 13);
    }
}
