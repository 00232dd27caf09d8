#pragma once

#include "layerfem/field.hpp"
#include "layerfem/mesh.hpp"
#include "layerfem/quadrature.hpp"

#include <memory>
#include <span>
#include <vector>

namespace layerfem {

/// One-dimensional Lagrange basis of degree k on [-1, 1] with equispaced
/// nodes (endpoints included). The Q_k reference element is its tensor square.
class ReferenceElement {
public:
    explicit ReferenceElement(int degree);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int size() const { return degree_ + 1; }
    [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }

    [[nodiscard]] double value(int j, double t) const;
    [[nodiscard]] double derivative(int j, double t) const;

private:
    int degree_;
    std::vector<double> nodes_;
};

/// 1-D basis values and derivatives tabulated at the points of a Gauss rule.
struct Tabulation {
    QuadratureRule rule;
    std::vector<std::vector<double>> value;       ///< [point][basis]
    std::vector<std::vector<double>> derivative;  ///< [point][basis], w.r.t. the reference coordinate
};

Tabulation tabulate(const ReferenceElement& ref, int points);

class FeSpace;

/// Quadrature points of one element with weights (Jacobian included) and the
/// local basis values and physical gradients at each point.
struct ElementValues {
    std::vector<Point> points;
    std::vector<double> weights;
    std::vector<std::vector<double>> phi;   ///< [point][local dof]
    std::vector<std::vector<Vec2>> grad;    ///< [point][local dof]
};

ElementValues element_values(const FeSpace& space, const Tabulation& tab, int i, int j);

/// Continuous Q_k space over a tensor mesh. Global DoFs live on the
/// (kN+1) x (kN+1) node lattice, numbered lexicographically with x fastest:
/// dof(l, m) = m (kN+1) + l.
class FeSpace {
public:
    FeSpace(TensorMesh2D mesh, int degree);

    [[nodiscard]] const TensorMesh2D& mesh() const { return mesh_; }
    [[nodiscard]] const SubdomainTable& subdomains() const { return subdomains_; }
    [[nodiscard]] const ReferenceElement& reference() const { return ref_; }
    [[nodiscard]] int degree() const { return ref_.degree(); }
    [[nodiscard]] int N() const { return mesh_.N(); }
    /// Lattice points per direction, kN + 1.
    [[nodiscard]] int lattice() const { return lattice_; }
    [[nodiscard]] int dof_count() const { return lattice_ * lattice_; }
    [[nodiscard]] int interior_dof_count() const { return (lattice_ - 2) * (lattice_ - 2); }
    [[nodiscard]] int local_dof_count() const { return ref_.size() * ref_.size(); }

    [[nodiscard]] int dof(int l, int m) const { return m * lattice_ + l; }
    [[nodiscard]] int lattice_x(int dof) const { return dof % lattice_; }
    [[nodiscard]] int lattice_y(int dof) const { return dof / lattice_; }
    /// Node coordinate s_l (identical in both directions).
    [[nodiscard]] double node(int l) const { return nodes_[static_cast<std::size_t>(l)]; }
    [[nodiscard]] const std::vector<double>& node_coordinates() const { return nodes_; }
    [[nodiscard]] Point node_point(int dof) const { return {node(lattice_x(dof)), node(lattice_y(dof))}; }
    [[nodiscard]] bool on_boundary(int dof) const { return boundary_[static_cast<std::size_t>(dof)] != 0; }

    /// Global DoFs of element tau_{i,j}, local order p + (k+1) q.
    [[nodiscard]] std::vector<int> element_dofs(int i, int j) const;
    void element_dofs(int i, int j, std::span<int> out) const;

private:
    TensorMesh2D mesh_;
    SubdomainTable subdomains_;
    ReferenceElement ref_;
    int lattice_;
    std::vector<double> nodes_;
    std::vector<char> boundary_;
};

/// Throws std::invalid_argument unless degree is 1, 2 or 3.
std::shared_ptr<const FeSpace> build_space(const TensorMesh2D& mesh, int degree);

struct ValueGradient {
    double value = 0.0;
    Vec2 gradient{0.0, 0.0};
};

/// Element of V^N given by its nodal coefficients.
class FeFunction {
public:
    explicit FeFunction(std::shared_ptr<const FeSpace> space);
    FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients);

    [[nodiscard]] const FeSpace& space() const { return *space_; }
    [[nodiscard]] const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
    [[nodiscard]] std::vector<double>& coefficients() { return coeffs_; }
    [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }
    [[nodiscard]] double operator[](int dof) const { return coeffs_[static_cast<std::size_t>(dof)]; }
    [[nodiscard]] double& operator[](int dof) { return coeffs_[static_cast<std::size_t>(dof)]; }

    /// Throws std::out_of_range for points outside [0,1]^2.
    [[nodiscard]] ValueGradient eval(double x, double y) const;
    /// Evaluation with the element fixed (the point may lie on its closure).
    [[nodiscard]] ValueGradient eval_in(int i, int j, double x, double y) const;

private:
    std::shared_ptr<const FeSpace> space_;
    std::vector<double> coeffs_;
};

/// Value and gradient of the local Q_k polynomial with local coefficients
/// `local` on element tau_{i,j}, at a physical point.
ValueGradient eval_local(const FeSpace& space, int i, int j, std::span<const double> local,
                         double x, double y);

/// Global DoFs whose nodes lie on the region, sorted and unique.
std::vector<int> select_dofs(const FeSpace& space, const BoundaryRegion& region);
std::vector<int> select_dofs(const FeSpace& space, const LineSegment& segment);

/// DoFs on the full mesh line {y = c} (Axis::horizontal) or {x = c}. The
/// coordinate must match a stored mesh line within 2 ulps; otherwise
/// std::invalid_argument is thrown.
std::vector<int> select_dofs_on_line(const FeSpace& space, Axis axis, double coordinate);

}  // namespace layerfem
