#include "layerfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace layerfem {

namespace {

// The 1-D building blocks and their first two derivatives.
struct Layer1D {
    double eps;
    double scale;  // 1 / (1 + e^{-1/eps})

    explicit Layer1D(double e) : eps(e), scale(1.0 / (1.0 + std::exp(-1.0 / e))) {}

    [[nodiscard]] double a(double t) const { return std::exp(-t / eps) * scale; }
    [[nodiscard]] double abar(double t) const { return std::exp(-(1.0 - t) / eps) * scale; }
    [[nodiscard]] double da(double t) const { return -a(t) / eps; }
    [[nodiscard]] double dabar(double t) const { return abar(t) / eps; }
    [[nodiscard]] double d2a(double t) const { return a(t) / (eps * eps); }
    [[nodiscard]] double d2abar(double t) const { return abar(t) / (eps * eps); }

    [[nodiscard]] double X(double t) const { return 1.0 - a(t) - abar(t); }
    [[nodiscard]] double dX(double t) const { return -da(t) - dabar(t); }
    [[nodiscard]] double d2X(double t) const { return -d2a(t) - d2abar(t); }
};

// Separable field g(x) h(y) from 1-D value/derivative callables.
struct Separable {
    std::function<double(double)> g, dg, d2g, h, dh, d2h;

    [[nodiscard]] ScalarField field() const
    {
        auto self = *this;
        return ScalarField([self](double x, double y) { return self.g(x) * self.h(y); },
                           [self](double x, double y) {
                               return Vec2{self.dg(x) * self.h(y), self.g(x) * self.dh(y)};
                           },
                           [self](double x, double y) {
                               return self.d2g(x) * self.h(y) + self.g(x) * self.d2h(y);
                           });
    }
};

}  // namespace

ScalarField LayerDecomposition::layers() const
{
    ScalarField total = w[0];
    for (std::size_t i = 1; i < 4; ++i) {
        total = total + w[i];
    }
    for (const auto& zi : z) {
        total = total + zi;
    }
    return total;
}

ScalarField LayerDecomposition::sum() const
{
    return v0 + layers();
}

double decomposition_mismatch(const LayerDecomposition& dec, const ScalarField& target, int samples,
                              unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double x = dist(rng);
        const double y = dist(rng);
        double total = dec.v0(x, y);
        for (const auto& wi : dec.w) {
            total += wi(x, y);
        }
        for (const auto& zi : dec.z) {
            total += zi(x, y);
        }
        const double t = target(x, y);
        worst = std::max(worst, std::abs(total - t) / std::max(std::abs(t), 1.0));
    }
    return worst;
}

ScalarField manufactured_solution(double epsilon)
{
    const Layer1D l(epsilon);
    return ScalarField([l](double x, double y) { return l.X(x) * l.X(y); },
                       [l](double x, double y) { return Vec2{l.dX(x) * l.X(y), l.X(x) * l.dX(y)}; },
                       [l](double x, double y) { return l.d2X(x) * l.X(y) + l.X(x) * l.d2X(y); });
}

LayerDecomposition manufactured_decomposition(double epsilon)
{
    const Layer1D l(epsilon);
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto a = [l](double t) { return l.a(t); };
    auto da = [l](double t) { return l.da(t); };
    auto d2a = [l](double t) { return l.d2a(t); };
    auto ab = [l](double t) { return l.abar(t); };
    auto dab = [l](double t) { return l.dabar(t); };
    auto d2ab = [l](double t) { return l.d2abar(t); };
    auto neg = [](std::function<double(double)> fn) { return [fn](double t) { return -fn(t); }; };

    LayerDecomposition dec;
    dec.v0 = ScalarField::constant(1.0);
    dec.w[0] = Separable{one, zero, zero, neg(a), neg(da), neg(d2a)}.field();
    dec.w[1] = Separable{neg(ab), neg(dab), neg(d2ab), one, zero, zero}.field();
    dec.w[2] = Separable{one, zero, zero, neg(ab), neg(dab), neg(d2ab)}.field();
    dec.w[3] = Separable{neg(a), neg(da), neg(d2a), one, zero, zero}.field();
    dec.z[0] = Separable{a, da, d2a, a, da, d2a}.field();
    dec.z[1] = Separable{ab, dab, d2ab, a, da, d2a}.field();
    dec.z[2] = Separable{ab, dab, d2ab, ab, dab, d2ab}.field();
    dec.z[3] = Separable{a, da, d2a, ab, dab, d2ab}.field();
    return dec;
}

ScalarField manufactured_rhs(double epsilon)
{
    const Layer1D l(epsilon);
    auto part = [l](double s, double t) {
        return (l.a(s) + l.abar(s)) * l.X(t);
    };
    auto dpart = [l](double s, double t) {
        return (l.da(s) + l.dabar(s)) * l.X(t) + l.dX(s) * (l.a(t) + l.abar(t)) + 2.0 * l.dX(s) * l.X(t);
    };
    return ScalarField([l, part](double x, double y) { return part(x, y) + part(y, x) + 2.0 * l.X(x) * l.X(y); },
                       [dpart](double x, double y) { return Vec2{dpart(x, y), dpart(y, x)}; });
}

ScalarField manufactured_reaction()
{
    return ScalarField::constant(2.0);
}

}  // namespace layerfem
