#include "layerfem/harness.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/sparse.hpp"
#include "layerfem/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_solver = 3;

struct MeshOptions {
    std::string kind = "roos";
    double sigma = 2.0;
    double beta = 1.0;
    std::string c1 = "auto";
};

void add_mesh_options(CLI::App* app, MeshOptions& o)
{
    app->add_option("--mesh", o.kind, "mesh kind: roos or kopteva")->capture_default_str();
    app->add_option("--sigma", o.sigma, "grading exponent")->capture_default_str();
    app->add_option("--beta", o.beta, "layer decay rate")->capture_default_str();
    app->add_option("--c1", o.c1, "transition constant of the kopteva mesh, or auto")->capture_default_str();
}

std::optional<double> parse_c1(const std::string& text)
{
    if (text == "auto") {
        return std::nullopt;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0) {
        throw layerfem::InvalidParameters("--c1 expects 'auto' or a number, got '" + text + "'");
    }
    return v;
}

layerfem::ErrorSelection parse_errors(const std::vector<std::string>& names)
{
    layerfem::ErrorSelection sel;
    sel.balanced = false;
    for (const auto& n : names) {
        if (n == "balanced") {
            sel.balanced = true;
        } else if (n == "energy") {
            sel.energy = true;
        } else if (n == "supercloseness") {
            sel.supercloseness = true;
        } else {
            throw layerfem::InvalidParameters("unknown error kind '" + n + "'");
        }
    }
    return sel;
}

std::string sibling(const std::string& csv, const std::string& suffix)
{
    const std::filesystem::path p(csv);
    return (p.parent_path() / (p.stem().string() + "_loglog_" + suffix + ".dat")).string();
}

int cmd_run(const MeshOptions& m, int k, const std::vector<double>& eps, const std::vector<int>& Ns,
            const std::vector<std::string>& errors, double tol, const std::string& out)
{
    layerfem::RunConfig cfg;
    cfg.kind = layerfem::parse_mesh_kind(m.kind);
    cfg.k = k;
    cfg.sigma = m.sigma;
    cfg.beta = m.beta;
    cfg.c1 = parse_c1(m.c1);
    cfg.epsilons = eps;
    cfg.Ns = Ns;
    cfg.errors = parse_errors(errors);
    cfg.tol = tol;
    cfg.output = out;

    const layerfem::ConvergenceTable table = layerfem::run_convergence(cfg, &std::cerr);
    if (table.rows.empty()) {
        throw layerfem::InvalidParameters("every (N, epsilon) pair was excluded");
    }
    if (out.empty()) {
        layerfem::write_csv(std::cout, table);
        return EXIT_SUCCESS;
    }
    std::ofstream csv(out);
    if (!csv) {
        throw layerfem::InvalidParameters("cannot open " + out);
    }
    layerfem::write_csv(csv, table);
    std::ofstream ec(sibling(out, "balanced"));
    layerfem::write_loglog(ec, table, false);
    if (cfg.errors.supercloseness) {
        std::ofstream es(sibling(out, "supercloseness"));
        layerfem::write_loglog(es, table, true);
    }
    std::cerr << "wrote " << out << '\n';
    return EXIT_SUCCESS;
}

int cmd_check_mesh(const MeshOptions& m, int N, double eps, const std::string& dump)
{
    layerfem::MeshParams p;
    p.kind = layerfem::parse_mesh_kind(m.kind);
    p.N = N;
    p.epsilon = eps;
    p.sigma = m.sigma;
    p.beta = m.beta;
    p.c1 = parse_c1(m.c1).value_or(layerfem::default_c1(m.sigma, m.beta));
    const layerfem::Mesh1D mesh = layerfem::build_mesh(p);
    const layerfem::Lemma1Report report = layerfem::verify_lemma1(mesh);
    report.print(std::cout);
    if (!dump.empty()) {
        std::ofstream os(dump);
        if (!os) {
            throw layerfem::InvalidParameters("cannot open " + dump);
        }
        layerfem::write_mesh_dump(os, mesh);
    }
    return report.passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Q_k finite elements for -eps^2 Laplace(u) + b u = f on layer-adapted meshes"};
    app.require_subcommand(1);

    MeshOptions run_mesh;
    int k = 1;
    std::vector<double> eps{1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<int> Ns{12, 24, 48, 96};
    std::vector<std::string> errors{"balanced"};
    double tol = 1e-12;
    std::string out;
    auto* run = app.add_subcommand("run", "convergence study over an (N, epsilon) grid");
    add_mesh_options(run, run_mesh);
    run->add_option("--k", k, "polynomial degree 1..3")->capture_default_str();
    run->add_option("--eps", eps, "comma-separated epsilon list")->delimiter(',')->capture_default_str();
    run->add_option("--N", Ns, "comma-separated N list")->delimiter(',')->capture_default_str();
    run->add_option("--errors", errors, "balanced, energy, supercloseness")->delimiter(',')->capture_default_str();
    run->add_option("--tol", tol, "relative CG tolerance")->capture_default_str();
    run->add_option("--out", out, "CSV output file (stdout when omitted)");

    MeshOptions check_mesh;
    int check_N = 16;
    double check_eps = 1e-3;
    std::string dump;
    auto* check = app.add_subcommand("check-mesh", "build one mesh and print the grid-property report");
    add_mesh_options(check, check_mesh);
    check->add_option("--N", check_N, "elements per direction")->capture_default_str();
    check->add_option("--eps", check_eps, "perturbation parameter")->capture_default_str();
    check->add_option("--dump", dump, "write the mesh points to this file");

    auto* verify = app.add_subcommand("verify", "run the property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid;
    }

    try {
        if (*run) {
            return cmd_run(run_mesh, k, eps, Ns, errors, tol, out);
        }
        if (*check) {
            return cmd_check_mesh(check_mesh, check_N, check_eps, dump);
        }
        if (*verify) {
            return layerfem::run_property_suite(std::cout) ? EXIT_SUCCESS : EXIT_FAILURE;
        }
    } catch (const layerfem::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return exit_invalid;
    }
    return EXIT_SUCCESS;
}
