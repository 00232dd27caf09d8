#pragma once

#include "layerfem/fespace.hpp"
#include "layerfem/sparse.hpp"

#include <vector>

namespace layerfem {

/// Dense row-major square matrix of one element, local DoF order.
struct LocalMatrix {
    int n = 0;
    std::vector<double> values;

    [[nodiscard]] double operator()(int r, int c) const { return values[static_cast<std::size_t>(r * n + c)]; }
    [[nodiscard]] double& operator()(int r, int c) { return values[static_cast<std::size_t>(r * n + c)]; }
};

/// eps^2 (grad phi_a, grad phi_b)_tau + (b phi_a, phi_b)_tau with (k+2)^2
/// Gauss points.
LocalMatrix element_matrix(const FeSpace& space, int i, int j, double epsilon, const ScalarField& b);

/// Linear system over the interior DoFs (homogeneous Dirichlet data
/// eliminated).
struct SystemPair {
    CsrMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> interior_to_global;
    std::vector<int> global_to_interior;  ///< -1 on boundary DoFs
};

/// Assembles a(u, v) = eps^2 (grad u, grad v) + (b u, v) and (f, v) on V_0^N.
/// Throws std::domain_error when b < 2 beta^2 at a quadrature point.
SystemPair assemble(const FeSpace& space, double epsilon, const ScalarField& b, const ScalarField& f,
                    double beta = 1.0);

/// Gram matrix of the energy inner product eps^2 (grad u, grad v) + (u, v)
/// on the same interior numbering as assemble().
CsrMatrix assemble_energy_gram(const FeSpace& space, double epsilon);

/// Scatters interior values into a full coefficient vector (zero on dOmega).
FeFunction expand_interior(std::shared_ptr<const FeSpace> space, const SystemPair& pair,
                           const std::vector<double>& interior);

/// Minimum of a(v, v) / ||v||_eps^2 over `trials` random interior vectors.
double coercivity_probe(const SystemPair& pair, const CsrMatrix& energy_gram, int trials, unsigned seed = 1);

}  // namespace layerfem
