#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace layerfem {

enum class MeshKind { roos, kopteva };

std::string to_string(MeshKind kind);
MeshKind parse_mesh_kind(const std::string& text);

/// Raised when a parameter set violates the admissibility conditions of the
/// layer-adapted mesh. The message names the violated inequality.
class InvalidParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct MeshParams {
    MeshKind kind = MeshKind::roos;
    int N = 16;
    double epsilon = 1e-3;
    double sigma = 2.0;
    double beta = 1.0;
    double c1 = 0.0;  ///< transition constant, used for kind == kopteva only
};

/// Admissible interval [lo, hi] for the transition constant of the kopteva mesh.
std::array<double, 2> c1_bounds(double sigma, double beta);

/// 4 sigma / (3 beta) when it lies inside c1_bounds(), otherwise the upper bound.
double default_c1(double sigma, double beta);

/// Every violated admissibility condition, as human-readable diagnostics.
/// Empty when the parameter set is valid.
std::vector<std::string> parameter_violations(const MeshParams& params);

/// Throws InvalidParameters listing all violations.
void require_valid(const MeshParams& params);

/// Slopes of the linear middle piece of the generating function:
/// (d1, d2) for kind == roos, (d3, d4) for kind == kopteva.
struct ContinuityConstants {
    double d_a = 0.0;
    double d_b = 0.0;
};

/// Only checks that the generating function is well defined (epsilon > 0,
/// and 4 c1 epsilon < 1 for the kopteva mesh); the full admissibility
/// conditions are enforced by build_mesh().
ContinuityConstants continuity_constants(const MeshParams& params);

/// Transition parameter of the kopteva generating function, 1/4 - c1 epsilon.
double kopteva_theta(const MeshParams& params);

/// Generating function psi (roos) or phi (kopteva) at t in [0, 1].
double generating_function(const MeshParams& params, double t);

/// One-sided limits of the generating function at its interior breakpoints:
/// {left(t1), right(t1), left(t2), right(t2)}.
std::array<double, 4> breakpoint_limits(const MeshParams& params);

class Mesh1D {
public:
    Mesh1D(MeshParams params, std::vector<double> points, std::vector<double> steps);

    [[nodiscard]] const MeshParams& params() const { return params_; }
    [[nodiscard]] int N() const { return params_.N; }
    [[nodiscard]] const std::vector<double>& points() const { return points_; }
    [[nodiscard]] const std::vector<double>& steps() const { return steps_; }
    [[nodiscard]] double point(int i) const { return points_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double step(int i) const { return steps_[static_cast<std::size_t>(i)]; }
    /// i* = N/4 - 2, last element index of the fine layer strip.
    [[nodiscard]] int layer_end() const { return params_.N / 4 - 2; }

    /// Element containing t; a point on a mesh line belongs to the lower element.
    [[nodiscard]] int locate(double t) const;

private:
    MeshParams params_;
    std::vector<double> points_;
    std::vector<double> steps_;
};

/// Throws InvalidParameters when the parameter set is not admissible.
Mesh1D build_mesh(const MeshParams& params);

/// Tensor-product mesh with identical point sets in x and y.
class TensorMesh2D {
public:
    explicit TensorMesh2D(Mesh1D line);

    [[nodiscard]] const Mesh1D& xs() const { return xs_; }
    [[nodiscard]] const Mesh1D& ys() const { return xs_; }
    [[nodiscard]] int N() const { return xs_.N(); }
    [[nodiscard]] double x(int i) const { return xs_.point(i); }
    [[nodiscard]] double y(int j) const { return xs_.point(j); }

private:
    Mesh1D xs_;
};

/// Inclusive index interval; empty when lo > hi.
struct IndexRange {
    int lo = 0;
    int hi = -1;

    [[nodiscard]] bool contains(int i) const { return lo <= i && i <= hi; }
    [[nodiscard]] int size() const { return hi >= lo ? hi - lo + 1 : 0; }
    friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// Rectangular block of elements tau_{i,j}, i in `i`, j in `j`.
struct ElementBlock {
    IndexRange i;
    IndexRange j;

    [[nodiscard]] bool contains(int ei, int ej) const { return i.contains(ei) && j.contains(ej); }
    [[nodiscard]] int size() const { return i.size() * j.size(); }
    friend bool operator==(const ElementBlock&, const ElementBlock&) = default;
};

/// Element-index set that need not be rectangular.
struct ElementSet {
    std::vector<std::array<int, 2>> elements;  ///< (i, j) pairs, sorted by (j, i)

    [[nodiscard]] bool contains(int ei, int ej) const;
    [[nodiscard]] std::size_t size() const { return elements.size(); }
};

enum class Axis { horizontal, vertical };

/// Closed piece of a mesh line between two vertex indices. For a horizontal
/// segment the line is y = y_line and x runs over [x_from, x_to].
struct LineSegment {
    Axis axis = Axis::horizontal;
    int line = 0;
    int from = 0;
    int to = 0;
};

using BoundaryRegion = std::vector<LineSegment>;

/// Side index convention used for layer parts: 0 bottom, 1 right, 2 top, 3 left.
/// Corner index convention: 0 bottom-left, 1 bottom-right, 2 top-right, 3 top-left.
struct SubdomainTable {
    int N = 0;
    int layer_end = 0;  ///< i* = j* = N/4 - 2

    ElementBlock omega0;        ///< (x_{N/4}, x_{3N/4})^2
    ElementBlock omega0_star;   ///< (x_{N/4-1}, x_{3N/4+1})^2
    ElementBlock omega0_star2;  ///< (x_{N/4-2}, x_{3N/4+2})^2

    std::array<ElementBlock, 4> edge_strips;    ///< Omega_{w_i}
    std::array<ElementBlock, 4> corner_boxes;   ///< Omega_{z_i}
    std::array<ElementSet, 4> edge_rings;       ///< e(Omega_{w_i})
    std::array<ElementSet, 4> corner_rings;     ///< e(Omega_{z_i})
    ElementSet domain_ring;                     ///< e(Omega), empty by definition

    std::array<LineSegment, 4> strip_interfaces;     ///< interior side of each strip
    std::array<BoundaryRegion, 4> corner_interfaces; ///< L-shaped interior sides of each box
    std::array<BoundaryRegion, 4> strip_gammas;      ///< closure of dOmega \ dOmega_{w_i}
    std::array<BoundaryRegion, 4> corner_gammas;     ///< closure of dOmega \ dOmega_{z_i}
    BoundaryRegion omega0_star_boundary;             ///< d Omega_0^*
    BoundaryRegion domain_boundary;                  ///< d Omega
};

SubdomainTable classify_subdomains(const TensorMesh2D& mesh);

/// Elements of `block` whose closure meets the closure of the complement of
/// `block` inside the N x N element grid.
ElementSet block_ring(const ElementBlock& block, int N);

/// Boundary of an element block as four mesh-line segments.
BoundaryRegion block_boundary(const ElementBlock& block);

struct Lemma1Check {
    std::string name;
    bool passed = true;
    bool explicit_constant = true;  ///< false for checks that only report constants
    int witness = -1;               ///< first violating index, -1 when none
    std::string detail;
};

struct Lemma1Report {
    MeshParams params;
    std::vector<Lemma1Check> checks;

    // Empirical constants for bounds stated with generic constants.
    double c_step_lower = 0.0;   ///< h_{N/4-1} / epsilon
    double c_step_upper = 0.0;   ///< N h_{N/4-1}
    double c4 = 0.0;             ///< min N h_i over N/4 <= i <= N/2
    double c5 = 0.0;             ///< max N h_i over N/4 <= i <= N/2
    double c_ln_n = 0.0;         ///< x_{N/4-1} / (sigma epsilon ln N)
    double c_ln_eps = 0.0;       ///< x_{N/4} / (sigma epsilon ln(1/epsilon))
    std::array<double, 3> c_decay{};  ///< max_i h_i^mu e^{-beta x_i/epsilon} / (epsilon N^-1)^mu, mu = 0, 1, sigma

    [[nodiscard]] bool passed() const;
    void print(std::ostream& os) const;
};

Lemma1Report verify_lemma1(const Mesh1D& mesh);

/// Plain-text dump: header `# kind N epsilon sigma beta c1`, then one
/// coordinate per line.
void write_mesh_dump(std::ostream& os, const Mesh1D& mesh);

}  // namespace layerfem
