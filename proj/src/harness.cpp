#include "layerfem/harness.hpp"

#include "layerfem/assembly.hpp"
#include "layerfem/interp.hpp"
#include "layerfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>

namespace layerfem {

namespace {

struct Accumulated {
    double l2 = 0.0;
    double h1 = 0.0;
};

double combine(const Accumulated& acc, NormMode mode, double epsilon)
{
    switch (mode) {
    case NormMode::L2:
        return std::sqrt(acc.l2);
    case NormMode::H1semi:
        return std::sqrt(acc.h1);
    case NormMode::energy:
        return std::sqrt(epsilon * epsilon * acc.h1 + acc.l2);
    case NormMode::balanced:
        return std::sqrt(epsilon * acc.h1 + acc.l2);
    }
    return 0.0;
}

// Integrates |g - fe|^2 and |grad(g - fe)|^2 element by element in (j, i) order.
template <class Reference>
Accumulated accumulate(const FeFunction& fe, Reference&& reference)
{
    const FeSpace& sp = fe.space();
    const Tabulation tab = tabulate(sp.reference(), sp.degree() + 3);
    std::vector<int> dofs(static_cast<std::size_t>(sp.local_dof_count()));
    Accumulated acc;
    for (int j = 0; j < sp.N(); ++j) {
        for (int i = 0; i < sp.N(); ++i) {
            const ElementValues ev = element_values(sp, tab, i, j);
            sp.element_dofs(i, j, dofs);
            for (std::size_t q = 0; q < ev.points.size(); ++q) {
                double v = 0.0;
                Vec2 g{0.0, 0.0};
                for (std::size_t a = 0; a < dofs.size(); ++a) {
                    const double c = fe[dofs[a]];
                    v += c * ev.phi[q][a];
                    g[0] += c * ev.grad[q][a][0];
                    g[1] += c * ev.grad[q][a][1];
                }
                const ValueGradient ref = reference(i, j, ev.points[q]);
                const double dv = ref.value - v;
                const double dx = ref.gradient[0] - g[0];
                const double dy = ref.gradient[1] - g[1];
                acc.l2 += ev.weights[q] * dv * dv;
                acc.h1 += ev.weights[q] * (dx * dx + dy * dy);
            }
        }
    }
    return acc;
}

}  // namespace

double norm_error(const ScalarField& exact, const FeFunction& fe, NormMode mode, double epsilon)
{
    const bool needs_gradient = mode != NormMode::L2;
    const Accumulated acc = accumulate(fe, [&](int, int, Point p) {
        ValueGradient out;
        out.value = exact(p.x, p.y);
        if (needs_gradient) {
            out.gradient = exact.gradient(p.x, p.y);
        }
        return out;
    });
    return combine(acc, mode, epsilon);
}

double norm_difference(const FeFunction& a, const FeFunction& b, NormMode mode, double epsilon)
{
    if (&a.space() != &b.space()) {
        throw std::invalid_argument("norm_difference: functions live on different spaces");
    }
    const Accumulated acc = accumulate(b, [&](int i, int j, Point p) { return a.eval_in(i, j, p.x, p.y); });
    return combine(acc, mode, epsilon);
}

MeshParams RunConfig::mesh_params(int N, double epsilon) const
{
    MeshParams p;
    p.kind = kind;
    p.N = N;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.beta = beta;
    p.c1 = c1.value_or(default_c1(sigma, beta));
    return p;
}

void validate_config(const RunConfig& cfg)
{
    if (cfg.k < 1 || cfg.k > 3) {
        throw InvalidParameters("k must be 1, 2 or 3");
    }
    if (!(cfg.sigma >= 1.0) || !(cfg.beta > 0.0)) {
        throw InvalidParameters("need sigma >= 1 and beta > 0");
    }
    if (cfg.Ns.empty() || cfg.epsilons.empty()) {
        throw InvalidParameters("N and epsilon lists must be non-empty");
    }
    for (std::size_t a = 1; a < cfg.Ns.size(); ++a) {
        if (cfg.Ns[a] <= cfg.Ns[a - 1]) {
            throw InvalidParameters("N list must be strictly increasing");
        }
    }
    for (int n : cfg.Ns) {
        if (n <= 0 || n % 4 != 0) {
            throw InvalidParameters("every N must be a positive multiple of 4");
        }
    }
    for (double e : cfg.epsilons) {
        if (!(e > 0.0)) {
            throw InvalidParameters("every epsilon must be positive");
        }
    }
    if (!(cfg.tol > 0.0)) {
        throw InvalidParameters("solver tolerance must be positive");
    }
}

CaseResult solve_case(const RunConfig& cfg, int N, double epsilon)
{
    const MeshParams params = cfg.mesh_params(N, epsilon);
    const TensorMesh2D mesh(build_mesh(params));
    const auto space = build_space(mesh, cfg.k);

    const ScalarField b = manufactured_reaction();
    const ScalarField f = manufactured_rhs(epsilon);
    const ScalarField u = manufactured_solution(epsilon);
    const SystemPair pair = assemble(*space, epsilon, b, f, cfg.beta);
    const CgResult cg = cg_solve(pair.matrix, pair.rhs, cfg.tol, 20000 + pair.matrix.size());
    FeFunction uh = expand_interior(space, pair, cg.solution);

    CaseRow row;
    row.kind = cfg.kind;
    row.k = cfg.k;
    row.sigma = cfg.sigma;
    row.epsilon = epsilon;
    row.N = N;
    row.dofs = space->dof_count();
    row.cg_iterations = cg.iterations;
    row.err_balanced = norm_error(u, uh, NormMode::balanced, epsilon);
    if (cfg.errors.energy) {
        row.err_energy = norm_error(u, uh, NormMode::energy, epsilon);
    }
    if (cfg.errors.supercloseness) {
        const FeFunction ps = build_Ps(manufactured_decomposition(epsilon), space, b);
        row.err_superclose = norm_difference(ps, uh, NormMode::balanced, epsilon);
    }
    return {std::move(uh), row};
}

double convergence_order(double coarse, double fine)
{
    return (std::log(coarse) - std::log(fine)) / std::log(2.0);
}

double fitted_order(const std::vector<int>& Ns, const std::vector<double>& errors)
{
    const auto n = static_cast<double>(Ns.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t a = 0; a < Ns.size(); ++a) {
        const double x = std::log(static_cast<double>(Ns[a]));
        const double y = std::log(errors[a]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<AggregateRow> aggregate_rows(const std::vector<CaseRow>& rows, const std::vector<int>& Ns)
{
    std::vector<AggregateRow> out;
    for (int n : Ns) {
        AggregateRow agg;
        agg.N = n;
        bool any = false;
        for (const auto& r : rows) {
            if (r.N != n) {
                continue;
            }
            any = true;
            agg.e_c = std::max(agg.e_c, r.err_balanced);
            if (r.err_superclose) {
                agg.e_s = std::max(agg.e_s.value_or(0.0), *r.err_superclose);
            }
        }
        if (any) {
            out.push_back(agg);
        }
    }
    for (std::size_t a = 0; a + 1 < out.size(); ++a) {
        if (out[a + 1].N != 2 * out[a].N) {
            continue;
        }
        out[a].p_c = convergence_order(out[a].e_c, out[a + 1].e_c);
        if (out[a].e_s && out[a + 1].e_s) {
            out[a].p_s = convergence_order(*out[a].e_s, *out[a + 1].e_s);
        }
    }
    return out;
}

ConvergenceTable run_convergence(const RunConfig& cfg, std::ostream* progress)
{
    validate_config(cfg);
    ConvergenceTable table;
    for (int n : cfg.Ns) {
        for (double eps : cfg.epsilons) {
            const auto violations = parameter_violations(cfg.mesh_params(n, eps));
            if (!violations.empty()) {
                table.excluded.push_back({n, eps, violations.front()});
                if (progress != nullptr) {
                    *progress << "excluded N=" << n << " epsilon=" << eps << ": " << violations.front() << '\n';
                }
                continue;
            }
            CaseResult res = solve_case(cfg, n, eps);
            if (progress != nullptr) {
                *progress << "N=" << n << " epsilon=" << eps << " dofs=" << res.row.dofs
                          << " cg_iterations=" << res.row.cg_iterations << " err_balanced=" << res.row.err_balanced;
                if (res.row.err_superclose) {
                    *progress << " err_superclose=" << *res.row.err_superclose;
                }
                *progress << '\n';
            }
            table.rows.push_back(res.row);
        }
    }
    table.aggregate = aggregate_rows(table.rows, cfg.Ns);
    return table;
}

namespace {

void put(std::ostream& os, const std::optional<double>& v)
{
    if (v) {
        os << *v;
    }
}

}  // namespace

void write_csv(std::ostream& os, const ConvergenceTable& table)
{
    const auto old = os.precision(10);
    os << "kind,k,sigma,epsilon,N,dofs,err_balanced,err_energy,err_superclose\n";
    for (const auto& r : table.rows) {
        os << to_string(r.kind) << ',' << r.k << ',' << r.sigma << ',' << r.epsilon << ',' << r.N << ','
           << r.dofs << ',' << r.err_balanced << ',';
        put(os, r.err_energy);
        os << ',';
        put(os, r.err_superclose);
        os << '\n';
    }
    os << '\n' << "N,e_c,p_c,e_s,p_s\n";
    for (const auto& a : table.aggregate) {
        os << a.N << ',' << a.e_c << ',';
        put(os, a.p_c);
        os << ',';
        put(os, a.e_s);
        os << ',';
        put(os, a.p_s);
        os << '\n';
    }
    os.precision(old);
}

void write_loglog(std::ostream& os, const ConvergenceTable& table, bool supercloseness)
{
    const auto old = os.precision(10);
    os << "log10(N),log10(err)\n";
    for (const auto& a : table.aggregate) {
        const std::optional<double> e = supercloseness ? a.e_s : std::optional<double>(a.e_c);
        if (e) {
            os << std::log10(static_cast<double>(a.N)) << ',' << std::log10(*e) << '\n';
        }
    }
    os.precision(old);
}

}  // namespace layerfem
