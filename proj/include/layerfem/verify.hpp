#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace layerfem {

struct PropertyCheck {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct MeshGridSummary {
    int meshes = 0;
    int excluded = 0;  ///< (N, epsilon) pairs rejected by the admissibility conditions
    std::vector<PropertyCheck> failures;

    [[nodiscard]] bool passed() const { return failures.empty() && meshes > 0; }
};

/// verify_lemma1 over {roos, kopteva} x N in {12, ..., 384} x epsilon in
/// {1e-3, ..., 1e-6} x sigma in {k+1, k+3/2 : k = 1, 2, 3}.
MeshGridSummary verify_mesh_grid();

/// Projection, interpolation, continuity, boundary and coercivity properties
/// for k = 1, 2, 3 on both mesh kinds.
std::vector<PropertyCheck> verify_operators();

/// cg_solve against a dense LU solve on `systems` random SPD matrices of
/// order at most 50; relative error limit 1e-10.
PropertyCheck verify_solver(int systems = 50, unsigned seed = 2024);

/// Runs all three groups, prints one line per check, returns true when every
/// check passes.
bool run_property_suite(std::ostream& os);

}  // namespace layerfem
