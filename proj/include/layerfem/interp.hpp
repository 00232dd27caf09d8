#pragma once

#include "layerfem/fespace.hpp"
#include "layerfem/problem.hpp"

#include <memory>
#include <span>
#include <vector>

namespace layerfem {

/// Element-wise Q_k function without a continuity constraint. Used to build
/// interpolants piece by piece before checking that the pieces glue together.
class BrokenFunction {
public:
    explicit BrokenFunction(std::shared_ptr<const FeSpace> space);
    static BrokenFunction from(const FeFunction& f);

    [[nodiscard]] const FeSpace& space() const { return *space_; }
    [[nodiscard]] std::span<double> element(int i, int j);
    [[nodiscard]] std::span<const double> element(int i, int j) const;
    [[nodiscard]] ValueGradient eval_in(int i, int j, double x, double y) const;

    BrokenFunction& operator+=(const BrokenFunction& other);
    BrokenFunction& operator-=(const BrokenFunction& other);
    /// Zeroes every element outside the block.
    void restrict_to(const ElementBlock& block);

    /// Largest difference between neighbouring elements' values, sampled at
    /// 2k+1 points along each interior edge.
    [[nodiscard]] double max_jump() const;
    /// Same, limited to the edges lying on the given mesh-line segments.
    [[nodiscard]] double max_jump_on(const BoundaryRegion& region) const;

    /// Nodal coefficients read from the element pieces. Meaningful only when
    /// max_jump() is negligible.
    [[nodiscard]] FeFunction collapse() const;

private:
    std::shared_ptr<const FeSpace> space_;
    int stride_;
    std::vector<double> coeffs_;
};

/// Nodal (Lagrange) interpolant: coefficient at node (s_l, t_m) is g(s_l, t_m).
FeFunction lagrange_interp(const ScalarField& g, std::shared_ptr<const FeSpace> space);

/// Lattice DoFs of the closed element block.
std::vector<int> block_dofs(const FeSpace& space, const ElementBlock& block);

struct ProjectionResult {
    FeFunction function;         ///< coefficients on block_dofs(region), zero elsewhere
    std::vector<int> dofs;       ///< block_dofs(region)
    double orthogonality_residual = 0.0;  ///< ||M pi g - m(g)||_inf / ||m(g)||_inf
    int iterations = 0;
};

/// b-weighted L2 projection onto the restriction of V^N to an element block
/// (no boundary constraint on the block's boundary). Mass matrix and moments
/// use (k+3)^2 Gauss points; the system is solved by CG at rel_tol.
ProjectionResult weighted_projection(const ScalarField& g, std::shared_ptr<const FeSpace> space,
                                     const ScalarField& b, const ElementBlock& region,
                                     double rel_tol = 1e-13);

/// Projection onto Omega_0^*.
ProjectionResult weighted_projection(const ScalarField& g, std::shared_ptr<const FeSpace> space,
                                     const ScalarField& b);

/// Nodal indicator of the lattice ring on the boundary of Omega_0^*.
FeFunction build_chi(std::shared_ptr<const FeSpace> space);

/// Convergence interpolant P_c u = P_1 v0 + P_2 w.
FeFunction build_Pc(const LayerDecomposition& dec, std::shared_ptr<const FeSpace> space,
                    const ScalarField& b);

// ---------------------------------------------------------------------------
// Vertices-edges-element interpolation.
//
// On tau_{i,j} the functionals are the four vertex values, the edge moments
// (m+1)/h^{m+1} int_e v (s - s_0)^m ds for m = 0..k-2, and the cell moments
// (m+1)(n+1)/(hx^{m+1} hy^{n+1}) int_tau v (x - x_i)^m (y - y_j)^n for
// m, n = 0..k-2. Every functional is attached to exactly one lattice node
// (vertex -> vertex node, m-th edge moment -> (m+1)-th node inside the edge,
// cell moment (m, n) -> interior node (m+1, n+1)), so a global functional
// vector shares the indexing of nodal coefficients.
// ---------------------------------------------------------------------------

/// Local functional matrix G[f][c] = F_f(phi_c) on the reference element;
/// it is the same for every element because the moments are scale-free.
class VeeElement {
public:
    explicit VeeElement(int degree);

    [[nodiscard]] int size() const { return n_; }
    [[nodiscard]] double functional(int f, int c) const { return g_[static_cast<std::size_t>(f * n_ + c)]; }
    /// Applies G^{-1}: local functional values -> local nodal coefficients.
    void solve(std::span<const double> functionals, std::span<double> coefficients) const;
    /// Reciprocal condition estimate of G (1-norm based); zero means singular.
    [[nodiscard]] double rcond() const { return rcond_; }
    /// (m+1) int_0^1 l_p(s) s^m ds for the equispaced nodal basis on [0, 1].
    [[nodiscard]] double moment(int m, int p) const;

private:
    int degree_;
    int n_;
    std::vector<double> g_;
    std::vector<double> ginv_;
    std::vector<double> moments_;
    double rcond_ = 0.0;
};

/// Functional values of an analytic field, (k+3)-point Gauss per direction.
std::vector<double> vee_functionals(const FeSpace& space, const ScalarField& g);
/// Functional values of a discrete function (exact).
std::vector<double> vee_functionals(const FeFunction& f);

/// Element pieces determined by a global functional vector.
BrokenFunction vee_local(std::shared_ptr<const FeSpace> space, std::span<const double> functionals);
/// Continuous function determined by a global functional vector.
FeFunction vee_reconstruct(std::shared_ptr<const FeSpace> space, std::span<const double> functionals);

FeFunction vee_interp(const ScalarField& g, std::shared_ptr<const FeSpace> space);

/// Replaces the functional values attached to `dofs` with `values` and keeps
/// every other functional of `base`. Throws std::out_of_range for bad indices.
FeFunction dof_override(const FeFunction& base, std::span<const int> dofs, std::span<const double> values);

/// Keeps the entries of `functionals` at `dofs`, zero elsewhere.
std::vector<double> mask_functionals(std::span<const double> functionals, std::span<const int> dofs);

struct SuperclosenessInterpolant {
    FeFunction ps;               ///< P_s u
    BrokenFunction pieces;       ///< P_s u assembled element by element
    BrokenFunction e_v0;         ///< E v0 (pi v0 inside Omega_0^*, A v0 + D v0 outside)
    std::array<BrokenFunction, 4> s_w;  ///< S_i w_i
    std::array<BrokenFunction, 4> t_z;  ///< T_i z_i
    FeFunction correction;       ///< C(w)
    double max_jump = 0.0;       ///< of `pieces` over all interior edges
    double e_v0_jump = 0.0;      ///< of `e_v0` across d Omega_0^*
};

/// P_s u = E v0 + sum S_i w_i + sum T_i z_i + C(w).
SuperclosenessInterpolant build_Ps_detailed(const LayerDecomposition& dec,
                                            std::shared_ptr<const FeSpace> space, const ScalarField& b);

/// Throws std::runtime_error when the pieces fail to glue within 1e-11
/// (relative to the largest coefficient).
FeFunction build_Ps(const LayerDecomposition& dec, std::shared_ptr<const FeSpace> space, const ScalarField& b);

}  // namespace layerfem
