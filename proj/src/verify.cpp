#include "layerfem/verify.hpp"

#include "layerfem/assembly.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/problem.hpp"
#include "layerfem/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace layerfem {

namespace {

PropertyCheck at_most(std::string name, double observed, double limit, std::string detail = {})
{
    return {std::move(name), observed <= limit, observed, limit, std::move(detail)};
}

std::string case_label(MeshKind kind, int k)
{
    return to_string(kind) + " k=" + std::to_string(k);
}

// Sum of c_ab x^a y^b over a, b <= k with fixed pseudo-random coefficients.
ScalarField random_qk(int k, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> c(static_cast<std::size_t>((k + 1) * (k + 1)));
    for (double& v : c) {
        v = dist(gen);
    }
    return ScalarField([k, c](double x, double y) {
        double sum = 0.0;
        double yb = 1.0;
        for (int b = 0; b <= k; ++b) {
            double xa = 1.0;
            for (int a = 0; a <= k; ++a) {
                sum += c[static_cast<std::size_t>(a + (k + 1) * b)] * xa * yb;
                xa *= x;
            }
            yb *= y;
        }
        return sum;
    });
}

double max_point_error(const FeFunction& fe, const ScalarField& g, int samples, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double x = dist(gen);
        const double y = dist(gen);
        worst = std::max(worst, std::abs(fe.eval(x, y).value - g(x, y)));
    }
    // The layer region is where the mesh is finest; sample it as well.
    const auto& pts = fe.space().mesh().xs().points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double x = 0.5 * (pts[i] + pts[i + 1]);
        worst = std::max(worst, std::abs(fe.eval(x, x).value - g(x, x)));
    }
    return worst;
}

double boundary_max(const FeFunction& f)
{
    const FeSpace& sp = f.space();
    double worst = 0.0;
    for (int d = 0; d < sp.dof_count(); ++d) {
        if (sp.on_boundary(d)) {
            worst = std::max(worst, std::abs(f[d]));
        }
    }
    return worst;
}

LayerDecomposition smooth_plus_layers(double epsilon)
{
    LayerDecomposition dec = manufactured_decomposition(epsilon);
    dec.v0 = ScalarField([](double x, double y) {
        const double t = 1.0 + y;
        return std::cos(std::numbers::pi * x / 2.0) * t * t * t;
    });
    return dec;
}

void operator_checks(MeshKind kind, int k, std::vector<PropertyCheck>& out)
{
    const int N = 16;
    const double eps = 1e-4;
    MeshParams p;
    p.kind = kind;
    p.N = N;
    p.epsilon = eps;
    p.sigma = k + 1.5;
    p.beta = 1.0;
    p.c1 = default_c1(p.sigma, p.beta);
    const auto space = build_space(TensorMesh2D(build_mesh(p)), k);
    const std::string tag = " [" + case_label(kind, k) + "]";
    const ScalarField b = manufactured_reaction();

    const ScalarField smooth([](double x, double y) { return std::sin(3.0 * x + 1.0) * std::exp(y); });
    const ProjectionResult pi = weighted_projection(smooth, space, b);
    const FeFunction& pig = pi.function;
    const ScalarField pig_field([&pig](double x, double y) { return pig.eval(x, y).value; });
    const ProjectionResult pi2 = weighted_projection(pig_field, space, b);
    double idem = 0.0;
    for (int d : pi.dofs) {
        idem = std::max(idem, std::abs(pi2.function[d] - pig[d]));
    }
    out.push_back(at_most("projection idempotence" + tag, idem / std::max(1.0, norm_inf(pig.coefficients())), 1e-11));
    out.push_back(at_most("projection orthogonality residual" + tag, pi.orthogonality_residual, 1e-11));

    const ScalarField q = random_qk(k, 100u + static_cast<unsigned>(k));
    out.push_back(at_most("Lagrange reproduction of Q_k" + tag, max_point_error(lagrange_interp(q, space), q, 200, 5), 1e-12));
    out.push_back(at_most("VEE reproduction of Q_k" + tag, max_point_error(vee_interp(q, space), q, 200, 6), 1e-12));

    const SuperclosenessInterpolant ps = build_Ps_detailed(smooth_plus_layers(eps), space, b);
    const double scale = std::max(1.0, norm_inf(ps.ps.coefficients()));
    out.push_back(at_most("continuity of E v0 across d Omega_0^*" + tag, ps.e_v0_jump / scale, 1e-11));
    out.push_back(at_most("continuity of P_s u across interfaces" + tag, ps.max_jump / scale, 1e-11));

    const LayerDecomposition dec = manufactured_decomposition(eps);
    out.push_back(at_most("P_c u boundary coefficients" + tag, boundary_max(build_Pc(dec, space, b)), 1e-11));
    out.push_back(at_most("P_s u boundary coefficients" + tag, boundary_max(build_Ps(dec, space, b)), 1e-11));

    const double beta = 1.0;
    const SystemPair pair = assemble(*space, eps, b, manufactured_rhs(eps), beta);
    const double lower = std::min(2.0 * beta * beta, 1.0) - 1e-10;
    const double probe = coercivity_probe(pair, assemble_energy_gram(*space, eps), 100, 17);
    out.push_back({"coercivity probe" + tag, probe >= lower, probe, lower, "minimum of a(v,v)/||v||_eps^2"});
}

}  // namespace

MeshGridSummary verify_mesh_grid()
{
    MeshGridSummary s;
    const std::vector<double> sigmas{2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
    for (MeshKind kind : {MeshKind::roos, MeshKind::kopteva}) {
        for (int N = 12; N <= 384; N *= 2) {
            for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
                for (double sigma : sigmas) {
                    MeshParams p;
                    p.kind = kind;
                    p.N = N;
                    p.epsilon = eps;
                    p.sigma = sigma;
                    p.beta = 1.0;
                    p.c1 = default_c1(sigma, p.beta);
                    if (!parameter_violations(p).empty()) {
                        ++s.excluded;
                        continue;
                    }
                    ++s.meshes;
                    const Lemma1Report r = verify_lemma1(build_mesh(p));
                    for (const auto& c : r.checks) {
                        if (c.explicit_constant && !c.passed) {
                            std::ostringstream os;
                            os << to_string(kind) << " N=" << N << " eps=" << eps << " sigma=" << sigma << ": "
                               << c.name << " (witness " << c.witness << ") " << c.detail;
                            s.failures.push_back({c.name, false, static_cast<double>(c.witness), 0.0, os.str()});
                        }
                    }
                }
            }
        }
    }
    return s;
}

std::vector<PropertyCheck> verify_operators()
{
    std::vector<PropertyCheck> out;
    for (MeshKind kind : {MeshKind::roos, MeshKind::kopteva}) {
        for (int k = 1; k <= 3; ++k) {
            operator_checks(kind, k, out);
        }
    }
    return out;
}

PropertyCheck verify_solver(int systems, unsigned seed)
{
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> order(2, 50);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst = 0.0;
    std::string detail = "all systems solved";
    for (int s = 0; s < systems; ++s) {
        const int n = order(gen);
        Eigen::MatrixXd B(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                B(r, c) = dist(gen);
            }
        }
        const Eigen::MatrixXd A = B.transpose() * B + n * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd rhs(n);
        for (int r = 0; r < n; ++r) {
            rhs(r) = dist(gen);
        }

        std::vector<int> offsets{0};
        std::vector<int> cols;
        std::vector<double> vals;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                cols.push_back(c);
                vals.push_back(A(r, c));
            }
            offsets.push_back(static_cast<int>(cols.size()));
        }
        const CsrMatrix csr(n, offsets, cols, vals);
        const std::vector<double> b(rhs.data(), rhs.data() + n);
        const Eigen::VectorXd direct = A.partialPivLu().solve(rhs);
        try {
            const CgResult cg = cg_solve(csr, b, 1e-14, 10 * n);
            const Eigen::Map<const Eigen::VectorXd> x(cg.solution.data(), n);
            worst = std::max(worst, (x - direct).norm() / direct.norm());
        } catch (const SolverError& e) {
            worst = std::numeric_limits<double>::infinity();
            detail = std::string("system ") + std::to_string(s) + ": " + e.what();
        }
    }
    return at_most("CG vs dense LU on " + std::to_string(systems) + " random SPD systems", worst, 1e-10, detail);
}

bool run_property_suite(std::ostream& os)
{
    bool ok = true;
    auto line = [&](const PropertyCheck& c) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << std::setprecision(3) << c.observed
           << " (limit " << c.limit << ")";
        if (!c.detail.empty()) {
            os << "  " << c.detail;
        }
        os << '\n';
        ok = ok && c.passed;
    };

    const MeshGridSummary grid = verify_mesh_grid();
    os << (grid.passed() ? "PASS " : "FAIL ") << "mesh grid: " << grid.meshes << " meshes checked, " << grid.excluded
       << " inadmissible (N, eps, sigma) combinations skipped, " << grid.failures.size() << " failed checks\n";
    for (const auto& f : grid.failures) {
        os << "  " << f.detail << '\n';
    }
    ok = ok && grid.passed();

    for (const auto& c : verify_operators()) {
        line(c);
    }
    line(verify_solver());
    return ok;
}

}  // namespace layerfem
