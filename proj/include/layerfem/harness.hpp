#pragma once

#include "layerfem/fespace.hpp"
#include "layerfem/mesh.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace layerfem {

enum class NormMode { L2, H1semi, energy, balanced };

/// ||exact - fe|| over the whole mesh with (k+3)^2 Gauss points per element.
/// energy: (eps^2 |v|_1^2 + ||v||^2)^{1/2}; balanced: (eps |v|_1^2 + ||v||^2)^{1/2}.
double norm_error(const ScalarField& exact, const FeFunction& fe, NormMode mode, double epsilon = 0.0);

/// ||a - b|| for two functions on the same space.
double norm_difference(const FeFunction& a, const FeFunction& b, NormMode mode, double epsilon = 0.0);

struct ErrorSelection {
    bool balanced = true;
    bool energy = false;
    bool supercloseness = false;
};

struct RunConfig {
    MeshKind kind = MeshKind::roos;
    int k = 1;
    double sigma = 2.0;
    double beta = 1.0;
    std::optional<double> c1;  ///< empty means default_c1(sigma, beta)
    std::vector<double> epsilons{1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<int> Ns{12, 24, 48, 96};
    ErrorSelection errors;
    double tol = 1e-12;
    std::string output;

    [[nodiscard]] MeshParams mesh_params(int N, double epsilon) const;
};

/// Throws InvalidParameters when k, sigma, beta, the N list or the tolerance
/// are unusable. Individual (N, epsilon) pairs are screened by run_convergence.
void validate_config(const RunConfig& cfg);

struct CaseRow {
    MeshKind kind = MeshKind::roos;
    int k = 1;
    double sigma = 0.0;
    double epsilon = 0.0;
    int N = 0;
    int dofs = 0;
    double err_balanced = 0.0;
    std::optional<double> err_energy;
    std::optional<double> err_superclose;
    int cg_iterations = 0;
};

struct CaseResult {
    FeFunction solution;
    CaseRow row;
};

/// Mesh, space, assembly, CG solve and the requested errors for one (N, eps).
/// Throws InvalidParameters on an inadmissible pair and SolverError when CG fails.
CaseResult solve_case(const RunConfig& cfg, int N, double epsilon);

struct AggregateRow {
    int N = 0;
    double e_c = 0.0;                ///< max over epsilon of err_balanced
    std::optional<double> p_c;       ///< order to the next (doubled) N
    std::optional<double> e_s;
    std::optional<double> p_s;
};

struct ExcludedCase {
    int N = 0;
    double epsilon = 0.0;
    std::string reason;
};

struct ConvergenceTable {
    std::vector<CaseRow> rows;
    std::vector<AggregateRow> aggregate;
    std::vector<ExcludedCase> excluded;
};

/// ln(e_N / e_2N) / ln 2.
double convergence_order(double coarse, double fine);

/// Least-squares slope of -log(err) against log(N).
double fitted_order(const std::vector<int>& Ns, const std::vector<double>& errors);

/// Per-N maxima over epsilon and orders between consecutive doubled N.
std::vector<AggregateRow> aggregate_rows(const std::vector<CaseRow>& rows, const std::vector<int>& Ns);

ConvergenceTable run_convergence(const RunConfig& cfg, std::ostream* progress = nullptr);

/// Case rows under the header `kind,k,sigma,epsilon,N,dofs,err_balanced,err_energy,err_superclose`,
/// a blank line, then the aggregate block `N,e_c,p_c,e_s,p_s`.
void write_csv(std::ostream& os, const ConvergenceTable& table);

/// `log10(N),log10(err)` for one aggregated error.
void write_loglog(std::ostream& os, const ConvergenceTable& table, bool supercloseness);

}  // namespace layerfem
