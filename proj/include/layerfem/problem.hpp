#pragma once

#include "layerfem/field.hpp"

#include <array>

namespace layerfem {

/// Splitting u = v0 + sum w_i + sum z_i of a solution into its regular part,
/// four edge layers (0 bottom, 1 right, 2 top, 3 left) and four corner layers
/// (0 bottom-left, 1 bottom-right, 2 top-right, 3 top-left).
struct LayerDecomposition {
    ScalarField v0;
    std::array<ScalarField, 4> w;
    std::array<ScalarField, 4> z;

    /// v0 + sum w_i + sum z_i.
    [[nodiscard]] ScalarField sum() const;
    /// sum w_i + sum z_i.
    [[nodiscard]] ScalarField layers() const;
};

/// Worst relative deviation |sum - target| / max(|target|, 1) at `samples`
/// pseudo-random points of the unit square.
double decomposition_mismatch(const LayerDecomposition& dec, const ScalarField& target, int samples,
                              unsigned seed = 11);

/// u(x, y) = X(x) X(y) with X(t) = 1 - (e^{-t/eps} + e^{-(1-t)/eps}) / (1 + e^{-1/eps}).
ScalarField manufactured_solution(double epsilon);

/// v0 = 1, w = {-a(y), -abar(x), -abar(y), -a(x)},
/// z = {a(x)a(y), abar(x)a(y), abar(x)abar(y), a(x)abar(y)} with
/// a(t) = e^{-t/eps} / (1 + e^{-1/eps}) and abar(t) = a(1 - t).
LayerDecomposition manufactured_decomposition(double epsilon);

/// f = -eps^2 Laplace(u) + 2u for the manufactured solution.
ScalarField manufactured_rhs(double epsilon);

/// Reaction coefficient of the manufactured problem, b = 2.
ScalarField manufactured_reaction();

}  // namespace layerfem
