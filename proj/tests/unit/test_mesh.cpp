#include "layerfem/mesh.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

using namespace layerfem;
using test::kopteva;
using test::roos;

namespace {

constexpr double ulp = std::numeric_limits<double>::epsilon();

bool mentions(const std::vector<std::string>& msgs, const std::string& needle)
{
    return std::any_of(msgs.begin(), msgs.end(), [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace

TEST(Mesh, EndpointsAreExact)
{
    for (const auto& p : {roos(16, 1e-3, 2.0), kopteva(16, 1e-3, 2.0), roos(96, 1e-6, 3.5)}) {
        const Mesh1D m = build_mesh(p);
        EXPECT_EQ(m.point(0), 0.0);
        EXPECT_EQ(m.point(p.N), 1.0);
    }
}

TEST(Mesh, RoosQuarterPointIsMinusSigmaEpsLogEps)
{
    const auto p = roos(32, 1e-4, 3.0);
    const Mesh1D m = build_mesh(p);
    const double expected = -(p.sigma * p.epsilon / p.beta) * std::log(p.epsilon);
    EXPECT_NEAR(m.point(8), expected, 4 * ulp * expected);
}

TEST(Mesh, RoosHandValuesN16)
{
    const Mesh1D m = build_mesh(roos(16, 1e-3, 2.0));
    EXPECT_NEAR(m.point(1), 5.747e-4, 5e-8);
    EXPECT_NEAR(m.point(4), 1.3816e-2, 5e-7);
    // independent closed form
    const double x1 = -2e-3 * std::log(1.0 - 4.0 * 0.999 / 16.0);
    EXPECT_NEAR(m.point(1), x1, 4 * ulp * x1);
    EXPECT_NEAR(m.point(4), -2e-3 * std::log(1e-3), 1e-17);
}

TEST(Mesh, RoosMiddlePartIsLinear)
{
    const auto p = roos(16, 1e-3, 2.0);
    const Mesh1D m = build_mesh(p);
    const double L = -(p.sigma * p.epsilon / p.beta) * std::log(p.epsilon);
    for (int i = 4; i <= 8; ++i) {
        const double t = i / 16.0;
        const double d1 = 2.0 * (1.0 - L);
        const double d2 = -2.0 * L;
        EXPECT_NEAR(m.point(i), d1 * (t - 0.25) + d2 * (t - 0.75), 1e-15) << i;
    }
}

TEST(Mesh, KoptevaMatchesGeneratingFunctionBranches)
{
    const auto p = kopteva(32, 1e-4, 3.0);
    const Mesh1D m = build_mesh(p);
    const double theta = 0.25 - p.c1 * p.epsilon;
    const double L = -(p.sigma * p.epsilon / p.beta) * std::log(4.0 * p.c1 * p.epsilon);
    for (int i = 0; i <= 16; ++i) {
        const double t = i / 32.0;
        const double expected = t <= theta ? -(p.sigma * p.epsilon / p.beta) * std::log(1.0 - 4.0 * t)
                                           : ((1.0 - L) * (t - theta) - L * (t - 1.0 + theta)) / (1.0 - 2.0 * theta);
        EXPECT_NEAR(m.point(i), expected, 1e-15) << i;
    }
}

TEST(Mesh, RoosContinuityConstants)
{
    const auto p = roos(16, 1e-3, 2.0);
    const ContinuityConstants c = continuity_constants(p);
    const double s = p.sigma * p.epsilon / p.beta * std::log(p.epsilon);
    EXPECT_NEAR(c.d_b, 2.0 * s, 1e-15);
    EXPECT_NEAR(c.d_a, 2.0 * (1.0 + s), 1e-15);

    const ContinuityConstants tiny = continuity_constants(roos(16, 1e-300, 2.0));
    EXPECT_NEAR(tiny.d_a, 2.0, 1e-12);
    EXPECT_NEAR(tiny.d_b, 0.0, 1e-12);
}

TEST(Mesh, BreakpointsContinuousWithin4Ulps)
{
    MeshParams k = kopteva(16, 1e-4, 2.0);
    k.c1 = 8.0 / 3.0;
    for (const auto& p : {k, roos(16, 1e-4, 2.0), kopteva(48, 1e-6, 3.5)}) {
        const auto lim = breakpoint_limits(p);
        EXPECT_LE(std::abs(lim[0] - lim[1]), 4 * ulp * std::abs(lim[0]));
        EXPECT_LE(std::abs(lim[2] - lim[3]), 4 * ulp * std::abs(lim[2]));
    }
}

TEST(Mesh, StepsMirrorExactlyAndPointsWithin2Ulps)
{
    for (const auto& p : {roos(24, 1e-5, 2.5), kopteva(48, 1e-3 / 48.0, 2.0)}) {
        const Mesh1D m = build_mesh(p);
        for (int i = 0; i < p.N; ++i) {
            EXPECT_EQ(m.step(i), m.step(p.N - 1 - i));
        }
        for (int i = 0; i <= p.N; ++i) {
            EXPECT_LE(std::abs(m.point(i) + m.point(p.N - i) - 1.0), 2 * ulp);
        }
    }
}

TEST(Mesh, RejectsAssumptionTwo)
{
    const auto p = roos(16, 0.1, 2.0);
    const auto v = parameter_violations(p);
    ASSERT_FALSE(v.empty());
    EXPECT_TRUE(mentions(v, "epsilon <= min{beta/(4 sigma), 1}"));
    EXPECT_THROW(build_mesh(p), InvalidParameters);
}

TEST(Mesh, RejectsBadN)
{
    EXPECT_TRUE(mentions(parameter_violations(roos(18, 1e-6, 2.0)), "multiple of 4"));
    EXPECT_TRUE(mentions(parameter_violations(roos(4, 1e-6, 2.0)), "N >= max{8"));
}

TEST(Mesh, RejectsKoptevaC1OutsideBounds)
{
    MeshParams p = kopteva(16, 1e-5, 2.0);
    const auto b = c1_bounds(p.sigma, p.beta);
    EXPECT_NEAR(b[0], 2.0 / (4.0 * std::exp(1.0)), 1e-15);
    EXPECT_NEAR(b[1], 1.0, 1e-15);
    p.c1 = 0.5 * b[0];
    EXPECT_TRUE(mentions(parameter_violations(p), "C1"));
    p.c1 = 2.0 * b[1];
    EXPECT_THROW(build_mesh(p), InvalidParameters);
}

TEST(Mesh, DefaultC1ClampsToAdmissibleInterval)
{
    // 4 sigma / 3 beta exceeds the upper bound sigma / (2 beta) whenever sigma / beta >= 1/4.
    EXPECT_DOUBLE_EQ(default_c1(2.0, 1.0), c1_bounds(2.0, 1.0)[1]);
    const auto b = c1_bounds(0.1, 1.0);
    EXPECT_GE(default_c1(0.1, 1.0), b[0]);
    EXPECT_LE(default_c1(0.1, 1.0), b[1]);
}

TEST(Mesh, KoptevaThetaBounds)
{
    for (int N : {12, 48, 384}) {
        const auto p = kopteva(N, 1e-4 / N, 3.0);
        const double theta = kopteva_theta(p);
        EXPECT_LT(theta, 0.25);
        EXPECT_GE(theta, 0.25 - 1.0 / N);
        EXPECT_LE(build_mesh(p).point(N / 4), 0.25);
    }
}

TEST(Mesh, LocateSendsMeshLinesToLowerElement)
{
    const Mesh1D m = build_mesh(roos(16, 1e-3, 2.0));
    EXPECT_EQ(m.locate(0.0), 0);
    EXPECT_EQ(m.locate(1.0), 15);
    EXPECT_EQ(m.locate(m.point(5)), 4);
    EXPECT_EQ(m.locate(0.5 * (m.point(5) + m.point(6))), 5);
}

TEST(Subdomains, N16IndexSets)
{
    const SubdomainTable s = classify_subdomains(TensorMesh2D(build_mesh(roos(16, 1e-3, 2.0))));
    EXPECT_EQ(s.layer_end, 2);
    EXPECT_EQ(s.omega0_star, (ElementBlock{{3, 12}, {3, 12}}));
    EXPECT_EQ(s.omega0, (ElementBlock{{4, 11}, {4, 11}}));
    EXPECT_EQ(s.omega0_star2, (ElementBlock{{2, 13}, {2, 13}}));
    EXPECT_EQ(s.edge_strips[0], (ElementBlock{{0, 15}, {0, 2}}));
    EXPECT_EQ(s.edge_strips[1], (ElementBlock{{13, 15}, {0, 15}}));
    EXPECT_EQ(s.edge_strips[2], (ElementBlock{{0, 15}, {13, 15}}));
    EXPECT_EQ(s.edge_strips[3], (ElementBlock{{0, 2}, {0, 15}}));
    EXPECT_EQ(s.corner_boxes[0], (ElementBlock{{0, 2}, {0, 2}}));
    EXPECT_EQ(s.corner_boxes[2], (ElementBlock{{13, 15}, {13, 15}}));

    ASSERT_EQ(s.edge_rings[0].size(), 16u);
    for (int i = 0; i < 16; ++i) {
        EXPECT_TRUE(s.edge_rings[0].contains(i, 2));
        EXPECT_FALSE(s.edge_rings[0].contains(i, 1));
    }
    EXPECT_EQ(s.domain_ring.size(), 0u);

    EXPECT_EQ(s.strip_interfaces[0].axis, Axis::horizontal);
    EXPECT_EQ(s.strip_interfaces[0].line, 3);
}

TEST(Subdomains, NestedStarRegions)
{
    const SubdomainTable s = classify_subdomains(TensorMesh2D(build_mesh(roos(48, 1e-5, 2.0))));
    for (int j = 0; j < 48; ++j) {
        for (int i = 0; i < 48; ++i) {
            if (s.omega0.contains(i, j)) {
                EXPECT_TRUE(s.omega0_star.contains(i, j));
            }
            if (s.omega0_star.contains(i, j)) {
                EXPECT_TRUE(s.omega0_star2.contains(i, j));
            }
        }
    }
}

TEST(Subdomains, GammaAndStripBoundaryCoverDomainBoundary)
{
    const int N = 16;
    const SubdomainTable s = classify_subdomains(TensorMesh2D(build_mesh(roos(N, 1e-3, 2.0))));
    auto vertices = [](const BoundaryRegion& r) {
        std::set<std::pair<int, int>> out;
        for (const auto& seg : r) {
            for (int t = seg.from; t <= seg.to; ++t) {
                out.insert(seg.axis == Axis::horizontal ? std::make_pair(t, seg.line) : std::make_pair(seg.line, t));
            }
        }
        return out;
    };
    const int top = s.layer_end + 1;
    const BoundaryRegion strip_part{{Axis::horizontal, 0, 0, N}, {Axis::vertical, 0, 0, top}, {Axis::vertical, N, 0, top}};
    const auto gamma = vertices(s.strip_gammas[0]);
    const auto strip = vertices(strip_part);
    const auto all = vertices(s.domain_boundary);

    std::set<std::pair<int, int>> uni = gamma;
    uni.insert(strip.begin(), strip.end());
    EXPECT_EQ(uni, all);
    std::vector<std::pair<int, int>> overlap;
    std::set_intersection(gamma.begin(), gamma.end(), strip.begin(), strip.end(), std::back_inserter(overlap));
    ASSERT_EQ(overlap.size(), 2u);
    EXPECT_EQ(overlap[0], std::make_pair(0, top));
    EXPECT_EQ(overlap[1], std::make_pair(N, top));
}

TEST(Lemma1, RoosN16Report)
{
    const Mesh1D m = build_mesh(roos(16, 1e-3, 2.0));
    EXPECT_LE(m.step(0), m.step(1));
    EXPECT_LE(m.step(1), m.step(2));
    EXPECT_LE(5e-4, m.step(2));
    EXPECT_LE(m.step(2), 2e-3);
    const Lemma1Report r = verify_lemma1(m);
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.c4, 0.0);
    EXPECT_GE(r.c5, r.c4);
    std::ostringstream os;
    r.print(os);
    EXPECT_NE(os.str().find("[PASS]"), std::string::npos);
}

TEST(Lemma1, ReportsWitnessOnBrokenMesh)
{
    const Mesh1D good = build_mesh(roos(16, 1e-3, 2.0));
    std::vector<double> x = good.points();
    std::vector<double> h = good.steps();
    std::swap(h[0], h[1]);
    x[1] = x[0] + h[0];
    const Lemma1Report r = verify_lemma1(Mesh1D(good.params(), x, h));
    EXPECT_FALSE(r.passed());
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const Lemma1Check& c) { return !c.passed; });
    ASSERT_NE(it, r.checks.end());
    EXPECT_GE(it->witness, 0);
}

TEST(Mesh, DumpFormat)
{
    const Mesh1D m = build_mesh(roos(12, 1e-3, 2.0));
    std::ostringstream os;
    write_mesh_dump(os, m);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header.rfind("# roos 12 ", 0), 0u);
    int lines = 0;
    double v = 0.0;
    while (is >> v) {
        EXPECT_EQ(v, m.point(lines));
        ++lines;
    }
    EXPECT_EQ(lines, 13);
}
