#include "layerfem/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace layerfem {

ReferenceElement::ReferenceElement(int degree) : degree_(degree)
{
    if (degree < 1 || degree > 3) {
        throw std::invalid_argument("Q_k degree must be 1, 2 or 3 (got " + std::to_string(degree) + ")");
    }
    nodes_.resize(static_cast<std::size_t>(degree + 1));
    for (int i = 0; i <= degree; ++i) {
        nodes_[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / degree;
    }
    nodes_.back() = 1.0;
}

double ReferenceElement::value(int j, double t) const
{
    const double nj = nodes_[static_cast<std::size_t>(j)];
    double v = 1.0;
    for (int m = 0; m <= degree_; ++m) {
        if (m != j) {
            const double nm = nodes_[static_cast<std::size_t>(m)];
            v *= (t - nm) / (nj - nm);
        }
    }
    return v;
}

double ReferenceElement::derivative(int j, double t) const
{
    const double nj = nodes_[static_cast<std::size_t>(j)];
    double sum = 0.0;
    for (int l = 0; l <= degree_; ++l) {
        if (l == j) {
            continue;
        }
        double term = 1.0 / (nj - nodes_[static_cast<std::size_t>(l)]);
        for (int m = 0; m <= degree_; ++m) {
            if (m != j && m != l) {
                const double nm = nodes_[static_cast<std::size_t>(m)];
                term *= (t - nm) / (nj - nm);
            }
        }
        sum += term;
    }
    return sum;
}

Tabulation tabulate(const ReferenceElement& ref, int points)
{
    Tabulation tab;
    tab.rule = gauss_rule(points);
    tab.value.assign(static_cast<std::size_t>(points), std::vector<double>(static_cast<std::size_t>(ref.size())));
    tab.derivative = tab.value;
    for (int q = 0; q < points; ++q) {
        for (int a = 0; a < ref.size(); ++a) {
            const double t = tab.rule.points[static_cast<std::size_t>(q)];
            tab.value[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)] = ref.value(a, t);
            tab.derivative[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)] = ref.derivative(a, t);
        }
    }
    return tab;
}

ElementValues element_values(const FeSpace& space, const Tabulation& tab, int i, int j)
{
    const auto& mesh = space.mesh();
    const int nb = space.reference().size();
    const int nq = tab.rule.size();
    const double x0 = mesh.x(i);
    const double y0 = mesh.y(j);
    const double hx = mesh.x(i + 1) - x0;
    const double hy = mesh.y(j + 1) - y0;

    ElementValues ev;
    const auto npts = static_cast<std::size_t>(nq * nq);
    ev.points.resize(npts);
    ev.weights.resize(npts);
    ev.phi.assign(npts, std::vector<double>(static_cast<std::size_t>(nb * nb)));
    ev.grad.assign(npts, std::vector<Vec2>(static_cast<std::size_t>(nb * nb)));
    for (int qy = 0; qy < nq; ++qy) {
        for (int qx = 0; qx < nq; ++qx) {
            const auto q = static_cast<std::size_t>(qx + nq * qy);
            const auto ux = static_cast<std::size_t>(qx);
            const auto uy = static_cast<std::size_t>(qy);
            ev.points[q] = {x0 + 0.5 * hx * (1.0 + tab.rule.points[ux]), y0 + 0.5 * hy * (1.0 + tab.rule.points[uy])};
            ev.weights[q] = tab.rule.weights[ux] * tab.rule.weights[uy] * 0.25 * hx * hy;
            for (int b = 0; b < nb; ++b) {
                for (int a = 0; a < nb; ++a) {
                    const auto l = static_cast<std::size_t>(a + nb * b);
                    const auto ua = static_cast<std::size_t>(a);
                    const auto ub = static_cast<std::size_t>(b);
                    ev.phi[q][l] = tab.value[ux][ua] * tab.value[uy][ub];
                    ev.grad[q][l] = {tab.derivative[ux][ua] * tab.value[uy][ub] * 2.0 / hx,
                                     tab.value[ux][ua] * tab.derivative[uy][ub] * 2.0 / hy};
                }
            }
        }
    }
    return ev;
}

FeSpace::FeSpace(TensorMesh2D mesh, int degree)
    : mesh_(std::move(mesh)), subdomains_(classify_subdomains(mesh_)), ref_(degree),
      lattice_(degree * mesh_.N() + 1)
{
    const int k = degree;
    const int n = mesh_.N();
    nodes_.resize(static_cast<std::size_t>(lattice_));
    for (int i = 0; i < n; ++i) {
        const double x0 = mesh_.x(i);
        const double h = mesh_.x(i + 1) - x0;
        nodes_[static_cast<std::size_t>(k * i)] = x0;
        for (int p = 1; p < k; ++p) {
            nodes_[static_cast<std::size_t>(k * i + p)] = x0 + h * p / k;
        }
    }
    nodes_.back() = mesh_.x(n);

    boundary_.assign(static_cast<std::size_t>(dof_count()), 0);
    for (int m = 0; m < lattice_; ++m) {
        for (int l = 0; l < lattice_; ++l) {
            if (l == 0 || m == 0 || l == lattice_ - 1 || m == lattice_ - 1) {
                boundary_[static_cast<std::size_t>(dof(l, m))] = 1;
            }
        }
    }
}

void FeSpace::element_dofs(int i, int j, std::span<int> out) const
{
    const int k = degree();
    for (int q = 0; q <= k; ++q) {
        for (int p = 0; p <= k; ++p) {
            out[static_cast<std::size_t>(p + (k + 1) * q)] = dof(k * i + p, k * j + q);
        }
    }
}

std::vector<int> FeSpace::element_dofs(int i, int j) const
{
    std::vector<int> out(static_cast<std::size_t>(local_dof_count()));
    element_dofs(i, j, out);
    return out;
}

std::shared_ptr<const FeSpace> build_space(const TensorMesh2D& mesh, int degree)
{
    return std::make_shared<const FeSpace>(mesh, degree);
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coeffs_(static_cast<std::size_t>(space_->dof_count()), 0.0)
{
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients))
{
    if (coeffs_.size() != static_cast<std::size_t>(space_->dof_count())) {
        throw std::invalid_argument("FeFunction: coefficient count does not match the space");
    }
}

ValueGradient eval_local(const FeSpace& space, int i, int j, std::span<const double> local,
                         double x, double y)
{
    const auto& mesh = space.mesh();
    const auto& ref = space.reference();
    const int nb = ref.size();
    const double hx = mesh.x(i + 1) - mesh.x(i);
    const double hy = mesh.y(j + 1) - mesh.y(j);
    const double xi = 2.0 * (x - mesh.x(i)) / hx - 1.0;
    const double eta = 2.0 * (y - mesh.y(j)) / hy - 1.0;

    std::array<double, 4> vx{}, dx{}, vy{}, dy{};
    for (int a = 0; a < nb; ++a) {
        vx[static_cast<std::size_t>(a)] = ref.value(a, xi);
        dx[static_cast<std::size_t>(a)] = ref.derivative(a, xi) * 2.0 / hx;
        vy[static_cast<std::size_t>(a)] = ref.value(a, eta);
        dy[static_cast<std::size_t>(a)] = ref.derivative(a, eta) * 2.0 / hy;
    }
    ValueGradient out;
    for (int q = 0; q < nb; ++q) {
        for (int p = 0; p < nb; ++p) {
            const double c = local[static_cast<std::size_t>(p + nb * q)];
            out.value += c * vx[static_cast<std::size_t>(p)] * vy[static_cast<std::size_t>(q)];
            out.gradient[0] += c * dx[static_cast<std::size_t>(p)] * vy[static_cast<std::size_t>(q)];
            out.gradient[1] += c * vx[static_cast<std::size_t>(p)] * dy[static_cast<std::size_t>(q)];
        }
    }
    return out;
}

ValueGradient FeFunction::eval_in(int i, int j, double x, double y) const
{
    std::array<int, 16> dofs{};
    std::array<double, 16> local{};
    const int nl = space_->local_dof_count();
    space_->element_dofs(i, j, std::span<int>(dofs.data(), static_cast<std::size_t>(nl)));
    for (int a = 0; a < nl; ++a) {
        local[static_cast<std::size_t>(a)] = coeffs_[static_cast<std::size_t>(dofs[static_cast<std::size_t>(a)])];
    }
    return eval_local(*space_, i, j, std::span<const double>(local.data(), static_cast<std::size_t>(nl)), x, y);
}

ValueGradient FeFunction::eval(double x, double y) const
{
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
        throw std::out_of_range("FeFunction::eval: point outside [0,1]^2");
    }
    const auto& line = space_->mesh().xs();
    return eval_in(line.locate(x), line.locate(y), x, y);
}

std::vector<int> select_dofs(const FeSpace& space, const LineSegment& s)
{
    const int k = space.degree();
    std::vector<int> out;
    for (int t = k * s.from; t <= k * s.to; ++t) {
        out.push_back(s.axis == Axis::horizontal ? space.dof(t, k * s.line) : space.dof(k * s.line, t));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> select_dofs(const FeSpace& space, const BoundaryRegion& region)
{
    std::vector<int> out;
    for (const auto& s : region) {
        const auto part = select_dofs(space, s);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> select_dofs_on_line(const FeSpace& space, Axis axis, double coordinate)
{
    const auto& pts = space.mesh().xs().points();
    for (int m = 0; m < static_cast<int>(pts.size()); ++m) {
        const double v = pts[static_cast<std::size_t>(m)];
        const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(v), std::abs(coordinate));
        if (std::abs(v - coordinate) <= tol) {
            return select_dofs(space, LineSegment{axis, m, 0, space.N()});
        }
    }
    throw std::invalid_argument("select_dofs_on_line: coordinate is not a mesh line");
}

}  // namespace layerfem
