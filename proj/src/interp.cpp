#include "layerfem/interp.hpp"

#include "layerfem/sparse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace layerfem {

// ---------------------------------------------------------------------------
// BrokenFunction

BrokenFunction::BrokenFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), stride_(space_->local_dof_count()),
      coeffs_(static_cast<std::size_t>(space_->N() * space_->N() * stride_), 0.0)
{
}

BrokenFunction BrokenFunction::from(const FeFunction& f)
{
    BrokenFunction out(f.space_ptr());
    const auto& sp = f.space();
    std::vector<int> dofs(static_cast<std::size_t>(sp.local_dof_count()));
    for (int j = 0; j < sp.N(); ++j) {
        for (int i = 0; i < sp.N(); ++i) {
            sp.element_dofs(i, j, dofs);
            auto e = out.element(i, j);
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                e[a] = f[dofs[a]];
            }
        }
    }
    return out;
}

std::span<double> BrokenFunction::element(int i, int j)
{
    const auto offset = static_cast<std::size_t>((j * space_->N() + i) * stride_);
    return {coeffs_.data() + offset, static_cast<std::size_t>(stride_)};
}

std::span<const double> BrokenFunction::element(int i, int j) const
{
    const auto offset = static_cast<std::size_t>((j * space_->N() + i) * stride_);
    return {coeffs_.data() + offset, static_cast<std::size_t>(stride_)};
}

ValueGradient BrokenFunction::eval_in(int i, int j, double x, double y) const
{
    return eval_local(*space_, i, j, element(i, j), x, y);
}

BrokenFunction& BrokenFunction::operator+=(const BrokenFunction& other)
{
    for (std::size_t a = 0; a < coeffs_.size(); ++a) {
        coeffs_[a] += other.coeffs_[a];
    }
    return *this;
}

BrokenFunction& BrokenFunction::operator-=(const BrokenFunction& other)
{
    for (std::size_t a = 0; a < coeffs_.size(); ++a) {
        coeffs_[a] -= other.coeffs_[a];
    }
    return *this;
}

void BrokenFunction::restrict_to(const ElementBlock& block)
{
    for (int j = 0; j < space_->N(); ++j) {
        for (int i = 0; i < space_->N(); ++i) {
            if (!block.contains(i, j)) {
                auto e = element(i, j);
                std::fill(e.begin(), e.end(), 0.0);
            }
        }
    }
}

namespace {

// Jump across the edge shared by elements (i, j) and its right (vertical
// edge) or upper (horizontal edge) neighbour.
double edge_jump(const BrokenFunction& f, Axis axis, int i, int j)
{
    const auto& mesh = f.space().mesh();
    const int samples = 2 * f.space().degree() + 1;
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double t = static_cast<double>(s) / (samples - 1);
        if (axis == Axis::vertical) {
            const double x = mesh.x(i + 1);
            const double y = mesh.y(j) + t * (mesh.y(j + 1) - mesh.y(j));
            worst = std::max(worst, std::abs(f.eval_in(i, j, x, y).value - f.eval_in(i + 1, j, x, y).value));
        } else {
            const double x = mesh.x(i) + t * (mesh.x(i + 1) - mesh.x(i));
            const double y = mesh.y(j + 1);
            worst = std::max(worst, std::abs(f.eval_in(i, j, x, y).value - f.eval_in(i, j + 1, x, y).value));
        }
    }
    return worst;
}

}  // namespace

double BrokenFunction::max_jump() const
{
    const int n = space_->N();
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (i + 1 < n) {
                worst = std::max(worst, edge_jump(*this, Axis::vertical, i, j));
            }
            if (j + 1 < n) {
                worst = std::max(worst, edge_jump(*this, Axis::horizontal, i, j));
            }
        }
    }
    return worst;
}

double BrokenFunction::max_jump_on(const BoundaryRegion& region) const
{
    const int n = space_->N();
    double worst = 0.0;
    for (const auto& seg : region) {
        if (seg.line <= 0 || seg.line >= n) {
            continue;
        }
        for (int t = seg.from; t < seg.to; ++t) {
            if (seg.axis == Axis::vertical) {
                worst = std::max(worst, edge_jump(*this, Axis::vertical, seg.line - 1, t));
            } else {
                worst = std::max(worst, edge_jump(*this, Axis::horizontal, t, seg.line - 1));
            }
        }
    }
    return worst;
}

FeFunction BrokenFunction::collapse() const
{
    FeFunction out(space_);
    std::vector<int> dofs(static_cast<std::size_t>(stride_));
    for (int j = 0; j < space_->N(); ++j) {
        for (int i = 0; i < space_->N(); ++i) {
            space_->element_dofs(i, j, dofs);
            const auto e = element(i, j);
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                out[dofs[a]] = e[a];
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lagrange interpolation, projection, chi, P_c

FeFunction lagrange_interp(const ScalarField& g, std::shared_ptr<const FeSpace> space)
{
    FeFunction out(space);
    for (int d = 0; d < space->dof_count(); ++d) {
        const Point p = space->node_point(d);
        out[d] = g(p.x, p.y);
    }
    return out;
}

std::vector<int> block_dofs(const FeSpace& space, const ElementBlock& block)
{
    const int k = space.degree();
    std::vector<int> out;
    for (int m = k * block.j.lo; m <= k * (block.j.hi + 1); ++m) {
        for (int l = k * block.i.lo; l <= k * (block.i.hi + 1); ++l) {
            out.push_back(space.dof(l, m));
        }
    }
    return out;
}

ProjectionResult weighted_projection(const ScalarField& g, std::shared_ptr<const FeSpace> space,
                                     const ScalarField& b, const ElementBlock& region, double rel_tol)
{
    const FeSpace& sp = *space;
    ProjectionResult out{FeFunction(space), block_dofs(sp, region), 0.0, 0};
    std::vector<int> local_of(static_cast<std::size_t>(sp.dof_count()), -1);
    for (std::size_t r = 0; r < out.dofs.size(); ++r) {
        local_of[static_cast<std::size_t>(out.dofs[r])] = static_cast<int>(r);
    }
    const int n = static_cast<int>(out.dofs.size());

    std::vector<std::vector<int>> pattern(static_cast<std::size_t>(n));
    std::vector<int> dofs(static_cast<std::size_t>(sp.local_dof_count()));
    for (int j = region.j.lo; j <= region.j.hi; ++j) {
        for (int i = region.i.lo; i <= region.i.hi; ++i) {
            sp.element_dofs(i, j, dofs);
            for (int a : dofs) {
                for (int c : dofs) {
                    pattern[static_cast<std::size_t>(local_of[static_cast<std::size_t>(a)])].push_back(
                        local_of[static_cast<std::size_t>(c)]);
                }
            }
        }
    }
    CsrMatrix mass = CsrMatrix::from_pattern(n, std::move(pattern));
    std::vector<double> moments(static_cast<std::size_t>(n), 0.0);

    const Tabulation tab = tabulate(sp.reference(), sp.degree() + 3);
    for (int j = region.j.lo; j <= region.j.hi; ++j) {
        for (int i = region.i.lo; i <= region.i.hi; ++i) {
            const ElementValues ev = element_values(sp, tab, i, j);
            sp.element_dofs(i, j, dofs);
            for (std::size_t q = 0; q < ev.points.size(); ++q) {
                const auto [x, y] = ev.points[q];
                const double bw = b(x, y) * ev.weights[q];
                if (!(bw > 0.0)) {
                    throw std::domain_error("weighted_projection: weight b must be positive");
                }
                const double gbw = g(x, y) * bw;
                for (std::size_t a = 0; a < dofs.size(); ++a) {
                    const int r = local_of[static_cast<std::size_t>(dofs[a])];
                    moments[static_cast<std::size_t>(r)] += gbw * ev.phi[q][a];
                    for (std::size_t c = 0; c < dofs.size(); ++c) {
                        mass.add(r, local_of[static_cast<std::size_t>(dofs[c])], bw * ev.phi[q][a] * ev.phi[q][c]);
                    }
                }
            }
        }
    }

    const double scale = norm_inf(moments);
    if (scale == 0.0) {
        return out;
    }
    // Solve D^{-1/2} M D^{-1/2} y = D^{-1/2} m so that the stopping test weighs
    // small and large elements alike.
    const std::vector<double> diag = mass.diagonal();
    std::vector<double> scaling(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < scaling.size(); ++r) {
        if (!(diag[r] > 0.0)) {
            throw std::domain_error("weighted_projection: mass matrix has a non-positive diagonal");
        }
        scaling[r] = 1.0 / std::sqrt(diag[r]);
    }
    CsrMatrix scaled = mass;
    std::vector<double> scaled_rhs(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        scaled_rhs[ur] = moments[ur] * scaling[ur];
        for (int e = scaled.row_offsets()[ur]; e < scaled.row_offsets()[ur + 1]; ++e) {
            const auto ue = static_cast<std::size_t>(e);
            scaled.values()[ue] *= scaling[ur] * scaling[static_cast<std::size_t>(scaled.columns()[ue])];
        }
    }
    auto solve = [&](const std::vector<double>& rhs) {
        try {
            return cg_solve(scaled, rhs, rel_tol, 10 * n + 100);
        } catch (const SolverError& e) {
            throw std::domain_error(std::string("weighted_projection: mass matrix solve failed: ") + e.what());
        }
    };
    CgResult cg = solve(scaled_rhs);
    std::vector<double> y = cg.solution;
    out.iterations = cg.iterations;

    // One step of iterative refinement.
    const std::vector<double> sy = scaled.multiply(y);
    std::vector<double> defect(static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < defect.size(); ++r) {
        defect[r] = scaled_rhs[r] - sy[r];
    }
    if (norm_inf(defect) > 0.0) {
        cg = solve(defect);
        for (std::size_t r = 0; r < y.size(); ++r) {
            y[r] += cg.solution[r];
        }
        out.iterations += cg.iterations;
    }

    std::vector<double> coeffs(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        coeffs[ur] = y[ur] * scaling[ur];
        out.function[out.dofs[ur]] = coeffs[ur];
    }
    const std::vector<double> mx = mass.multiply(coeffs);
    double res = 0.0;
    for (int r = 0; r < n; ++r) {
        res = std::max(res, std::abs(mx[static_cast<std::size_t>(r)] - moments[static_cast<std::size_t>(r)]));
    }
    out.orthogonality_residual = res / scale;
    return out;
}

ProjectionResult weighted_projection(const ScalarField& g, std::shared_ptr<const FeSpace> space,
                                     const ScalarField& b)
{
    const ElementBlock region = space->subdomains().omega0_star;
    return weighted_projection(g, std::move(space), b, region);
}

FeFunction build_chi(std::shared_ptr<const FeSpace> space)
{
    FeFunction chi(space);
    for (int d : select_dofs(*space, space->subdomains().omega0_star_boundary)) {
        chi[d] = 1.0;
    }
    return chi;
}

FeFunction build_Pc(const LayerDecomposition& dec, std::shared_ptr<const FeSpace> space, const ScalarField& b)
{
    const ProjectionResult pi = weighted_projection(dec.v0, space, b);
    const ScalarField layers = dec.layers();
    FeFunction out(space);
    std::vector<char> in_star(static_cast<std::size_t>(space->dof_count()), 0);
    for (int d : pi.dofs) {
        in_star[static_cast<std::size_t>(d)] = 1;
    }
    for (int d = 0; d < space->dof_count(); ++d) {
        if (in_star[static_cast<std::size_t>(d)] != 0) {
            // pi v0 inside; on the ring chi = 1 selects pi v0 and zeroes w.
            out[d] = pi.function[d];
        } else {
            const Point p = space->node_point(d);
            out[d] = dec.v0(p.x, p.y) + layers(p.x, p.y);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vertices-edges-element operator

VeeElement::VeeElement(int degree) : degree_(degree), n_((degree + 1) * (degree + 1))
{
    const ReferenceElement ref(degree);
    const int nb = degree + 1;
    // Moments (m+1) int_0^1 l_p(s) s^m ds, exact with k+2 Gauss points.
    moments_.assign(static_cast<std::size_t>(std::max(degree - 1, 0) * nb), 0.0);
    const QuadratureRule rule = gauss_rule(degree + 2);
    for (int m = 0; m + 2 <= degree; ++m) {
        for (int p = 0; p < nb; ++p) {
            double sum = 0.0;
            for (int q = 0; q < rule.size(); ++q) {
                const double t = rule.points[static_cast<std::size_t>(q)];
                const double s = 0.5 * (1.0 + t);
                sum += 0.5 * rule.weights[static_cast<std::size_t>(q)] * ref.value(p, t) * std::pow(s, m);
            }
            moments_[static_cast<std::size_t>(m * nb + p)] = (m + 1) * sum;
        }
    }

    auto functional_1d = [&](int index, int p) {
        // Functional attached to local node `index` along one direction,
        // applied to the 1-D basis function p: endpoint evaluation or moment.
        if (index == 0) {
            return p == 0 ? 1.0 : 0.0;
        }
        if (index == degree) {
            return p == degree ? 1.0 : 0.0;
        }
        return moment(index - 1, p);
    };

    g_.assign(static_cast<std::size_t>(n_ * n_), 0.0);
    for (int fq = 0; fq < nb; ++fq) {
        for (int fp = 0; fp < nb; ++fp) {
            const int f = fp + nb * fq;
            for (int cq = 0; cq < nb; ++cq) {
                for (int cp = 0; cp < nb; ++cp) {
                    const int c = cp + nb * cq;
                    g_[static_cast<std::size_t>(f * n_ + c)] = functional_1d(fp, cp) * functional_1d(fq, cq);
                }
            }
        }
    }

    Eigen::MatrixXd g(n_, n_);
    for (int r = 0; r < n_; ++r) {
        for (int c = 0; c < n_; ++c) {
            g(r, c) = g_[static_cast<std::size_t>(r * n_ + c)];
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (!lu.isInvertible()) {
        throw std::runtime_error("VeeElement: local functional matrix is singular");
    }
    const Eigen::MatrixXd inv = lu.inverse();
    rcond_ = 1.0 / (g.cwiseAbs().colwise().sum().maxCoeff() * inv.cwiseAbs().colwise().sum().maxCoeff());
    ginv_.resize(static_cast<std::size_t>(n_ * n_));
    for (int r = 0; r < n_; ++r) {
        for (int c = 0; c < n_; ++c) {
            ginv_[static_cast<std::size_t>(r * n_ + c)] = inv(r, c);
        }
    }
}

double VeeElement::moment(int m, int p) const
{
    return moments_[static_cast<std::size_t>(m * (degree_ + 1) + p)];
}

void VeeElement::solve(std::span<const double> functionals, std::span<double> coefficients) const
{
    for (int r = 0; r < n_; ++r) {
        double sum = 0.0;
        for (int c = 0; c < n_; ++c) {
            sum += ginv_[static_cast<std::size_t>(r * n_ + c)] * functionals[static_cast<std::size_t>(c)];
        }
        coefficients[static_cast<std::size_t>(r)] = sum;
    }
}

std::vector<double> vee_functionals(const FeSpace& space, const ScalarField& g)
{
    const int k = space.degree();
    const int lat = space.lattice();
    const auto& mesh = space.mesh();
    const QuadratureRule rule = gauss_rule(k + 3);
    std::vector<double> out(static_cast<std::size_t>(space.dof_count()), 0.0);

    for (int m = 0; m < lat; ++m) {
        const int j = m / k;
        const int q = m % k;
        for (int l = 0; l < lat; ++l) {
            const int i = l / k;
            const int p = l % k;
            double value = 0.0;
            if (p == 0 && q == 0) {
                value = g(mesh.x(i), mesh.y(j));
            } else if (q == 0) {
                // horizontal edge y = y_j, x in [x_i, x_{i+1}], moment p - 1
                const double x0 = mesh.x(i);
                const double hx = mesh.x(i + 1) - x0;
                for (int a = 0; a < rule.size(); ++a) {
                    const double s = 0.5 * (1.0 + rule.points[static_cast<std::size_t>(a)]);
                    value += 0.5 * rule.weights[static_cast<std::size_t>(a)] * g(x0 + s * hx, mesh.y(j)) *
                             std::pow(s, p - 1);
                }
                value *= p;
            } else if (p == 0) {
                const double y0 = mesh.y(j);
                const double hy = mesh.y(j + 1) - y0;
                for (int a = 0; a < rule.size(); ++a) {
                    const double t = 0.5 * (1.0 + rule.points[static_cast<std::size_t>(a)]);
                    value += 0.5 * rule.weights[static_cast<std::size_t>(a)] * g(mesh.x(i), y0 + t * hy) *
                             std::pow(t, q - 1);
                }
                value *= q;
            } else {
                const double x0 = mesh.x(i);
                const double hx = mesh.x(i + 1) - x0;
                const double y0 = mesh.y(j);
                const double hy = mesh.y(j + 1) - y0;
                for (int b = 0; b < rule.size(); ++b) {
                    const double t = 0.5 * (1.0 + rule.points[static_cast<std::size_t>(b)]);
                    const double wt = 0.5 * rule.weights[static_cast<std::size_t>(b)] * std::pow(t, q - 1);
                    for (int a = 0; a < rule.size(); ++a) {
                        const double s = 0.5 * (1.0 + rule.points[static_cast<std::size_t>(a)]);
                        value += wt * 0.5 * rule.weights[static_cast<std::size_t>(a)] * std::pow(s, p - 1) *
                                 g(x0 + s * hx, y0 + t * hy);
                    }
                }
                value *= p * q;
            }
            out[static_cast<std::size_t>(space.dof(l, m))] = value;
        }
    }
    return out;
}

std::vector<double> vee_functionals(const FeFunction& f)
{
    const FeSpace& space = f.space();
    const int k = space.degree();
    const int lat = space.lattice();
    const VeeElement vee(k);
    std::vector<double> out(static_cast<std::size_t>(space.dof_count()), 0.0);
    for (int m = 0; m < lat; ++m) {
        const int q = m % k;
        const int mb = m - q;  // lattice index of the cell's lower line
        for (int l = 0; l < lat; ++l) {
            const int p = l % k;
            const int lb = l - p;
            double value = 0.0;
            if (p == 0 && q == 0) {
                value = f[space.dof(l, m)];
            } else if (q == 0) {
                for (int a = 0; a <= k; ++a) {
                    value += vee.moment(p - 1, a) * f[space.dof(lb + a, m)];
                }
            } else if (p == 0) {
                for (int a = 0; a <= k; ++a) {
                    value += vee.moment(q - 1, a) * f[space.dof(l, mb + a)];
                }
            } else {
                for (int b = 0; b <= k; ++b) {
                    for (int a = 0; a <= k; ++a) {
                        value += vee.moment(p - 1, a) * vee.moment(q - 1, b) * f[space.dof(lb + a, mb + b)];
                    }
                }
            }
            out[static_cast<std::size_t>(space.dof(l, m))] = value;
        }
    }
    return out;
}

BrokenFunction vee_local(std::shared_ptr<const FeSpace> space, std::span<const double> functionals)
{
    const VeeElement vee(space->degree());
    BrokenFunction out(space);
    std::vector<int> dofs(static_cast<std::size_t>(space->local_dof_count()));
    std::vector<double> local(dofs.size());
    for (int j = 0; j < space->N(); ++j) {
        for (int i = 0; i < space->N(); ++i) {
            space->element_dofs(i, j, dofs);
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                local[a] = functionals[static_cast<std::size_t>(dofs[a])];
            }
            vee.solve(local, out.element(i, j));
        }
    }
    return out;
}

FeFunction vee_reconstruct(std::shared_ptr<const FeSpace> space, std::span<const double> functionals)
{
    return vee_local(std::move(space), functionals).collapse();
}

FeFunction vee_interp(const ScalarField& g, std::shared_ptr<const FeSpace> space)
{
    const auto functionals = vee_functionals(*space, g);
    return vee_reconstruct(std::move(space), functionals);
}

FeFunction dof_override(const FeFunction& base, std::span<const int> dofs, std::span<const double> values)
{
    if (dofs.size() != values.size()) {
        throw std::invalid_argument("dof_override: dofs and values differ in length");
    }
    auto functionals = vee_functionals(base);
    for (std::size_t a = 0; a < dofs.size(); ++a) {
        if (dofs[a] < 0 || dofs[a] >= base.space().dof_count()) {
            throw std::out_of_range("dof_override: DoF index " + std::to_string(dofs[a]) + " out of range");
        }
        functionals[static_cast<std::size_t>(dofs[a])] = values[a];
    }
    return vee_reconstruct(base.space_ptr(), functionals);
}

std::vector<double> mask_functionals(std::span<const double> functionals, std::span<const int> dofs)
{
    std::vector<double> out(functionals.size(), 0.0);
    for (int d : dofs) {
        out[static_cast<std::size_t>(d)] = functionals[static_cast<std::size_t>(d)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// P_s

SuperclosenessInterpolant build_Ps_detailed(const LayerDecomposition& dec,
                                            std::shared_ptr<const FeSpace> space, const ScalarField& b)
{
    const FeSpace& sp = *space;
    const SubdomainTable& sub = sp.subdomains();

    // E v0: pi v0 on Omega_0^*, A v0 + D v0 elsewhere, where D v0 carries the
    // functionals F(pi v0 - v0) on d Omega_0^*.
    const ProjectionResult pi = weighted_projection(dec.v0, space, b);
    const auto f_v0 = vee_functionals(sp, dec.v0);
    const auto f_pi = vee_functionals(pi.function);
    const auto ring = select_dofs(sp, sub.omega0_star_boundary);
    std::vector<double> d_v0(f_v0.size(), 0.0);
    for (int d : ring) {
        d_v0[static_cast<std::size_t>(d)] = f_pi[static_cast<std::size_t>(d)] - f_v0[static_cast<std::size_t>(d)];
    }
    BrokenFunction outside = vee_local(space, f_v0);
    outside += vee_local(space, d_v0);
    BrokenFunction inside = BrokenFunction::from(pi.function);
    BrokenFunction e_v0(space);
    for (int j = 0; j < sp.N(); ++j) {
        for (int i = 0; i < sp.N(); ++i) {
            const auto src = sub.omega0_star.contains(i, j) ? inside.element(i, j) : outside.element(i, j);
            std::copy(src.begin(), src.end(), e_v0.element(i, j).begin());
        }
    }

    SuperclosenessInterpolant out{FeFunction(space), e_v0, e_v0,
                                  {BrokenFunction(space), BrokenFunction(space), BrokenFunction(space), BrokenFunction(space)},
                                  {BrokenFunction(space), BrokenFunction(space), BrokenFunction(space), BrokenFunction(space)},
                                  FeFunction(space), 0.0, 0.0};
    std::vector<double> correction(f_v0.size(), 0.0);
    auto add_masked = [&](const std::vector<double>& f, const std::vector<int>& dofs) {
        for (int d : dofs) {
            correction[static_cast<std::size_t>(d)] += f[static_cast<std::size_t>(d)];
        }
    };

    for (std::size_t s = 0; s < 4; ++s) {
        // S_i w_i = A w_i - B_i w_i on the strip, zero outside; B_i carries
        // the functionals of w_i on the strip's interior side.
        const auto f_w = vee_functionals(sp, dec.w[s]);
        const auto line = select_dofs(sp, sub.strip_interfaces[s]);
        BrokenFunction piece = vee_local(space, f_w);
        piece -= vee_local(space, mask_functionals(f_w, line));
        piece.restrict_to(sub.edge_strips[s]);
        out.s_w[s] = piece;
        add_masked(f_w, select_dofs(sp, sub.strip_gammas[s]));

        const auto f_z = vee_functionals(sp, dec.z[s]);
        const auto corner_lines = select_dofs(sp, sub.corner_interfaces[s]);
        BrokenFunction corner = vee_local(space, f_z);
        corner -= vee_local(space, mask_functionals(f_z, corner_lines));
        corner.restrict_to(sub.corner_boxes[s]);
        out.t_z[s] = corner;
        add_masked(f_z, select_dofs(sp, sub.corner_gammas[s]));
    }
    const BrokenFunction c_w = vee_local(space, correction);
    out.correction = c_w.collapse();

    out.pieces = e_v0;
    for (std::size_t s = 0; s < 4; ++s) {
        out.pieces += out.s_w[s];
        out.pieces += out.t_z[s];
    }
    out.pieces += c_w;
    out.max_jump = out.pieces.max_jump();
    out.e_v0_jump = e_v0.max_jump_on(sub.omega0_star_boundary);
    out.ps = out.pieces.collapse();
    return out;
}

FeFunction build_Ps(const LayerDecomposition& dec, std::shared_ptr<const FeSpace> space, const ScalarField& b)
{
    SuperclosenessInterpolant r = build_Ps_detailed(dec, std::move(space), b);
    const double scale = std::max(1.0, norm_inf(r.ps.coefficients()));
    if (r.max_jump > 1e-11 * scale) {
        throw std::runtime_error("build_Ps: interpolant pieces are discontinuous (jump " +
                                 std::to_string(r.max_jump) + ")");
    }
    return std::move(r.ps);
}

}  // namespace layerfem
