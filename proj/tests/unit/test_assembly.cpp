#include "layerfem/assembly.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/problem.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace layerfem;
using test::layer_space;
using test::roos;
using test::uniform_space;

TEST(ElementMatrix, BilinearUnitSquareHandValues)
{
    const auto s = uniform_space(1, 1);
    for (double eps : {1.0, 0.1, 1e-3}) {
        const LocalMatrix m = element_matrix(*s, 0, 0, eps, ScalarField::constant(2.0));
        const double e2 = eps * eps;
        for (int a = 0; a < 4; ++a) {
            EXPECT_NEAR(m(a, a), e2 * 2.0 / 3.0 + 2.0 / 9.0, 1e-15);
        }
        // local order p + 2q: 0 = (0,0), 3 = (1,1)
        EXPECT_NEAR(m(0, 3), -e2 / 3.0 + 2.0 / 36.0, 1e-15);
        EXPECT_NEAR(m(1, 2), -e2 / 3.0 + 2.0 / 36.0, 1e-15);
        EXPECT_NEAR(m(0, 1), -e2 / 6.0 + 2.0 / 18.0, 1e-15);
    }
}

TEST(Assemble, SymmetricWithPositiveDiagonal)
{
    for (int k = 1; k <= 3; ++k) {
        const auto s = layer_space(roos(16, 1e-4, k + 1.0), k);
        const SystemPair p = assemble(*s, 1e-4, ScalarField::constant(2.0), manufactured_rhs(1e-4));
        EXPECT_TRUE(p.matrix.structurally_symmetric());
        EXPECT_LE(p.matrix.asymmetry(), 1e-14 * p.matrix.max_abs());
        for (double d : p.matrix.diagonal()) {
            EXPECT_GT(d, 0.0);
        }
        EXPECT_EQ(p.matrix.size(), s->interior_dof_count());
    }
}

TEST(Assemble, ZeroLoadGivesZeroRhs)
{
    const auto s = uniform_space(4, 2);
    const SystemPair p = assemble(*s, 0.1, ScalarField::constant(2.0), ScalarField::constant(0.0));
    for (double v : p.rhs) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Assemble, RejectsSmallReaction)
{
    const auto s = uniform_space(2, 1);
    EXPECT_THROW(assemble(*s, 0.1, ScalarField::constant(1.0), ScalarField::constant(1.0), 1.0), std::domain_error);
    EXPECT_THROW(assemble(*s, 0.1, ScalarField::constant(-1.0), ScalarField::constant(1.0), 0.1), std::domain_error);
    EXPECT_NO_THROW(assemble(*s, 0.1, ScalarField::constant(8.0), ScalarField::constant(1.0), 2.0));
}

TEST(Assemble, ElementAdditivityOn2x2)
{
    const auto s = uniform_space(2, 1);
    const ScalarField b([](double x, double y) { return 2.0 + x * y; });
    const double eps = 0.3;
    const SystemPair p = assemble(*s, eps, b, ScalarField::constant(1.0));
    ASSERT_EQ(p.matrix.size(), 1);
    // the centre node is local corner 3, 2, 1, 0 of elements (0,0), (1,0), (0,1), (1,1)
    const double sum = element_matrix(*s, 0, 0, eps, b)(3, 3) + element_matrix(*s, 1, 0, eps, b)(2, 2) +
                       element_matrix(*s, 0, 1, eps, b)(1, 1) + element_matrix(*s, 1, 1, eps, b)(0, 0);
    EXPECT_NEAR(p.matrix.at(0, 0), sum, 4 * std::numeric_limits<double>::epsilon() * sum);
    EXPECT_NEAR(p.rhs[0], 0.25, 1e-15);
}

TEST(Assemble, InteriorMapsAreConsistent)
{
    const auto s = uniform_space(4, 2);
    const SystemPair p = assemble(*s, 0.1, ScalarField::constant(2.0), ScalarField::constant(1.0));
    for (std::size_t r = 0; r < p.interior_to_global.size(); ++r) {
        const int g = p.interior_to_global[r];
        EXPECT_FALSE(s->on_boundary(g));
        EXPECT_EQ(p.global_to_interior[static_cast<std::size_t>(g)], static_cast<int>(r));
    }
    for (int d = 0; d < s->dof_count(); ++d) {
        if (s->on_boundary(d)) {
            EXPECT_EQ(p.global_to_interior[static_cast<std::size_t>(d)], -1);
        }
    }
}

TEST(Assemble, GalerkinResidualBelowSolverTolerance)
{
    const double eps = 1e-3;
    const auto s = layer_space(roos(24, eps, 3.0), 2);
    const SystemPair p = assemble(*s, eps, manufactured_reaction(), manufactured_rhs(eps));
    const CgResult cg = cg_solve(p.matrix, p.rhs, 1e-12);
    const auto ax = p.matrix.multiply(cg.solution);
    double worst = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        worst = std::max(worst, std::abs(ax[i] - p.rhs[i]));
    }
    EXPECT_LE(worst, 1e-12 * norm2(p.rhs));
}

TEST(Assemble, ReproducesQkSolution)
{
    // -eps^2 Laplace(u) + 2u = f with u = x(1-x)y(1-y) is in Q_2, so Q_2 elements recover it
    // up to quadrature and solver error.
    const double eps = 0.5;
    const ScalarField u([](double x, double y) { return x * (1 - x) * y * (1 - y); });
    const ScalarField f([eps](double x, double y) {
        const double lap = -2.0 * y * (1 - y) - 2.0 * x * (1 - x);
        return -eps * eps * lap + 2.0 * x * (1 - x) * y * (1 - y);
    });
    const auto s = uniform_space(3, 2);
    const SystemPair p = assemble(*s, eps, ScalarField::constant(2.0), f);
    const FeFunction uh = expand_interior(s, p, cg_solve(p.matrix, p.rhs, 1e-14).solution);
    const FeFunction ui = lagrange_interp(u, s);
    for (int d = 0; d < s->dof_count(); ++d) {
        EXPECT_NEAR(uh[d], ui[d], 1e-13);
    }
}

TEST(Coercivity, ReactionTwoGivesAtLeastOne)
{
    const double eps = 1e-3;
    const auto s = layer_space(roos(16, eps, 2.0), 1);
    const SystemPair p = assemble(*s, eps, ScalarField::constant(2.0), ScalarField::constant(1.0));
    EXPECT_GE(coercivity_probe(p, assemble_energy_gram(*s, eps), 100), 1.0 - 1e-10);
}

TEST(Coercivity, MinimumCapsAtOne)
{
    const double eps = 1e-2;
    const auto s = layer_space(roos(16, 1e-3, 2.0), 2);
    const SystemPair p = assemble(*s, eps, ScalarField::constant(8.0), ScalarField::constant(1.0), 2.0);
    EXPECT_GE(coercivity_probe(p, assemble_energy_gram(*s, eps), 100, 3), 1.0 - 1e-10);
}
