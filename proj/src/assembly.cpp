#include "layerfem/assembly.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace layerfem {

namespace {

// Pattern of the interior system: DoFs are coupled when they share an element.
CsrMatrix interior_pattern(const FeSpace& space, const std::vector<int>& g2i, int n_interior)
{
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(n_interior));
    const int n = space.N();
    std::vector<int> dofs(static_cast<std::size_t>(space.local_dof_count()));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            space.element_dofs(i, j, dofs);
            for (int a : dofs) {
                const int ra = g2i[static_cast<std::size_t>(a)];
                if (ra < 0) {
                    continue;
                }
                for (int b : dofs) {
                    const int cb = g2i[static_cast<std::size_t>(b)];
                    if (cb >= 0) {
                        rows[static_cast<std::size_t>(ra)].push_back(cb);
                    }
                }
            }
        }
    }
    return CsrMatrix::from_pattern(n_interior, std::move(rows));
}

void number_interior(const FeSpace& space, std::vector<int>& i2g, std::vector<int>& g2i)
{
    g2i.assign(static_cast<std::size_t>(space.dof_count()), -1);
    i2g.clear();
    for (int d = 0; d < space.dof_count(); ++d) {
        if (!space.on_boundary(d)) {
            g2i[static_cast<std::size_t>(d)] = static_cast<int>(i2g.size());
            i2g.push_back(d);
        }
    }
}

template <class Kernel>
void scatter_matrix(const FeSpace& space, const std::vector<int>& g2i, CsrMatrix& a, Kernel&& kernel)
{
    const int n = space.N();
    std::vector<int> dofs(static_cast<std::size_t>(space.local_dof_count()));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const LocalMatrix local = kernel(i, j);
            space.element_dofs(i, j, dofs);
            for (int r = 0; r < local.n; ++r) {
                const int gr = g2i[static_cast<std::size_t>(dofs[static_cast<std::size_t>(r)])];
                if (gr < 0) {
                    continue;
                }
                for (int c = 0; c < local.n; ++c) {
                    const int gc = g2i[static_cast<std::size_t>(dofs[static_cast<std::size_t>(c)])];
                    if (gc >= 0) {
                        a.add(gr, gc, local(r, c));
                    }
                }
            }
        }
    }
}

LocalMatrix weighted_element_matrix(const ElementValues& ev, double diffusion, const std::vector<double>& reaction)
{
    const int nl = static_cast<int>(ev.phi.front().size());
    LocalMatrix m{nl, std::vector<double>(static_cast<std::size_t>(nl * nl), 0.0)};
    for (std::size_t q = 0; q < ev.points.size(); ++q) {
        const double w = ev.weights[q];
        const double bw = reaction[q] * w;
        for (int r = 0; r < nl; ++r) {
            const auto& gr = ev.grad[q][static_cast<std::size_t>(r)];
            const double pr = ev.phi[q][static_cast<std::size_t>(r)];
            for (int c = 0; c < nl; ++c) {
                const auto& gc = ev.grad[q][static_cast<std::size_t>(c)];
                m(r, c) += diffusion * w * (gr[0] * gc[0] + gr[1] * gc[1]) +
                           bw * pr * ev.phi[q][static_cast<std::size_t>(c)];
            }
        }
    }
    return m;
}

}  // namespace

LocalMatrix element_matrix(const FeSpace& space, int i, int j, double epsilon, const ScalarField& b)
{
    const Tabulation tab = tabulate(space.reference(), space.degree() + 2);
    const ElementValues ev = element_values(space, tab, i, j);
    std::vector<double> reaction(ev.points.size());
    for (std::size_t q = 0; q < ev.points.size(); ++q) {
        reaction[q] = b(ev.points[q].x, ev.points[q].y);
    }
    return weighted_element_matrix(ev, epsilon * epsilon, reaction);
}

SystemPair assemble(const FeSpace& space, double epsilon, const ScalarField& b, const ScalarField& f,
                    double beta)
{
    SystemPair pair;
    number_interior(space, pair.interior_to_global, pair.global_to_interior);
    const int ni = static_cast<int>(pair.interior_to_global.size());
    pair.matrix = interior_pattern(space, pair.global_to_interior, ni);
    pair.rhs.assign(static_cast<std::size_t>(ni), 0.0);

    const Tabulation tab = tabulate(space.reference(), space.degree() + 2);
    const double floor = 2.0 * beta * beta;
    const double diffusion = epsilon * epsilon;
    std::vector<int> dofs(static_cast<std::size_t>(space.local_dof_count()));
    std::vector<double> reaction;

    scatter_matrix(space, pair.global_to_interior, pair.matrix, [&](int i, int j) {
        const ElementValues ev = element_values(space, tab, i, j);
        reaction.resize(ev.points.size());
        for (std::size_t q = 0; q < ev.points.size(); ++q) {
            const auto [x, y] = ev.points[q];
            reaction[q] = b(x, y);
            if (!(reaction[q] >= floor)) {
                std::ostringstream msg;
                msg << "assemble: reaction coefficient b(" << x << ", " << y << ") = " << reaction[q]
                    << " violates b >= 2 beta^2 = " << floor;
                throw std::domain_error(msg.str());
            }
        }
        space.element_dofs(i, j, dofs);
        for (std::size_t q = 0; q < ev.points.size(); ++q) {
            const double fw = f(ev.points[q].x, ev.points[q].y) * ev.weights[q];
            for (std::size_t a = 0; a < dofs.size(); ++a) {
                const int r = pair.global_to_interior[static_cast<std::size_t>(dofs[a])];
                if (r >= 0) {
                    pair.rhs[static_cast<std::size_t>(r)] += fw * ev.phi[q][a];
                }
            }
        }
        return weighted_element_matrix(ev, diffusion, reaction);
    });
    return pair;
}

CsrMatrix assemble_energy_gram(const FeSpace& space, double epsilon)
{
    std::vector<int> i2g;
    std::vector<int> g2i;
    number_interior(space, i2g, g2i);
    CsrMatrix gram = interior_pattern(space, g2i, static_cast<int>(i2g.size()));
    const Tabulation tab = tabulate(space.reference(), space.degree() + 2);
    scatter_matrix(space, g2i, gram, [&](int i, int j) {
        const ElementValues ev = element_values(space, tab, i, j);
        return weighted_element_matrix(ev, epsilon * epsilon, std::vector<double>(ev.points.size(), 1.0));
    });
    return gram;
}

FeFunction expand_interior(std::shared_ptr<const FeSpace> space, const SystemPair& pair,
                           const std::vector<double>& interior)
{
    FeFunction out(std::move(space));
    for (std::size_t r = 0; r < interior.size(); ++r) {
        out[pair.interior_to_global[r]] = interior[r];
    }
    return out;
}

double coercivity_probe(const SystemPair& pair, const CsrMatrix& energy_gram, int trials, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    const int n = pair.matrix.size();
    std::vector<double> v(static_cast<std::size_t>(n));
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        for (auto& x : v) {
            x = dist(rng);
        }
        const double scale = norm2(v);
        for (auto& x : v) {
            x /= scale;
        }
        const double av = dot(v, pair.matrix.multiply(v));
        const double ev = dot(v, energy_gram.multiply(v));
        worst = std::min(worst, av / ev);
    }
    return worst;
}

}  // namespace layerfem
